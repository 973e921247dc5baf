#include "lobarena/archetype.hpp"

namespace lobarena {

std::string_view to_string(ArchetypeLabel a) {
  switch (a) {
    case ArchetypeLabel::MarketMaker: return "MARKET_MAKER";
    case ArchetypeLabel::MarketTaker: return "MARKET_TAKER";
    case ArchetypeLabel::DirectionalTrader: return "DIRECTIONAL_TRADER";
    case ArchetypeLabel::Background: return "BACKGROUND";
  }
  return "BACKGROUND";
}

std::optional<ArchetypeLabel> archetype_from_string(std::string_view s) {
  if (s == "MARKET_MAKER") return ArchetypeLabel::MarketMaker;
  if (s == "MARKET_TAKER") return ArchetypeLabel::MarketTaker;
  if (s == "DIRECTIONAL_TRADER") return ArchetypeLabel::DirectionalTrader;
  if (s == "BACKGROUND") return ArchetypeLabel::Background;
  return std::nullopt;
}

}  // namespace lobarena
