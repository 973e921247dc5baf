#include "lobarena/scenario/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lobarena/util/error.hpp"

namespace lobarena::scenario {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& field,
                       const std::string& what) {
  throw ConfigError(origin, ": field '", field, "': ", what);
}

void check_keys(const json& obj, const std::string& origin,
                const std::string& prefix, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (allowed.count(key) == 0)
      fail(origin, prefix.empty() ? key : prefix + "." + key, "unknown field");
  }
}

// `label` is the dotted path used in error messages; the lookup key is its
// last component.
template <typename T>
T get_as(const json& obj, const std::string& origin, const std::string& label,
         T fallback) {
  auto dot = label.rfind('.');
  std::string key = dot == std::string::npos ? label : label.substr(dot + 1);
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(origin, label, "wrong type");
  }
}

void parse_group_common(const json& j, const std::string& origin,
                        const std::string& prefix, int& count) {
  count = get_as<int>(j, origin, prefix + ".count", count);
}

SimTime parse_session_time(const json& obj, const std::string& origin,
                           const std::string& field, SimTime fallback) {
  if (!obj.contains(field)) return fallback;
  std::string text;
  try {
    text = obj.at(field).get<std::string>();
  } catch (const json::exception&) {
    fail(origin, field, "expected \"HH:MM\" string");
  }
  try {
    return parse_clock(text);
  } catch (const Error& e) {
    fail(origin, field, e.what());
  }
}

}  // namespace

ScenarioConfig ScenarioConfig::preset(const std::string& name) {
  ScenarioConfig cfg;
  cfg.book_seed_levels = {{5, 500},    {10, 500},   {15, 500},
                          {40, 20000}, {60, 20000}, {80, 20000}};
  if (name == "default") {
    cfg.noise.count = 5000;
    cfg.value.count = 100;
    cfg.market_maker.count = 3;
    cfg.twap.count = 3;
    cfg.vwap.count = 3;
    cfg.momentum.count = 5;
    cfg.mean_reversion.count = 5;
    return cfg;
  }
  if (name == "small") {
    cfg.noise.count = 500;
    cfg.value.count = 10;
    cfg.market_maker.count = 1;
    cfg.twap.count = 1;
    cfg.vwap.count = 1;
    cfg.momentum.count = 1;
    cfg.mean_reversion.count = 1;
    return cfg;
  }
  throw ConfigError("unknown preset '", name, "' (expected default|small)");
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read scenario file: ", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), path);
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text,
                                              const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(origin, ": invalid JSON: ", e.what());
  }
  if (!j.is_object()) throw ConfigError(origin, ": top level must be an object");

  ScenarioConfig cfg;
  if (j.contains("preset")) {
    std::string name = get_as<std::string>(j, origin, "preset", "");
    cfg = preset(name);
  }
  check_keys(j, origin, "",
             {"preset", "days", "session_open", "session_close", "tick_size",
              "latency_ns", "computation_delay_ns", "fundamental",
              "volume_profile", "agents", "book_seed_levels", "master_seed"});

  cfg.days = get_as<int>(j, origin, "days", cfg.days);
  cfg.session_open = parse_session_time(j, origin, "session_open", cfg.session_open);
  cfg.session_close =
      parse_session_time(j, origin, "session_close", cfg.session_close);
  cfg.tick_size = get_as<double>(j, origin, "tick_size", cfg.tick_size);
  cfg.latency_ns = get_as<SimTime>(j, origin, "latency_ns", cfg.latency_ns);
  cfg.computation_delay_ns = get_as<SimTime>(j, origin, "computation_delay_ns",
                                             cfg.computation_delay_ns);
  if (j.contains("master_seed"))
    cfg.master_seed = get_as<std::uint64_t>(j, origin, "master_seed", 0);

  if (j.contains("fundamental")) {
    const json& f = j.at("fundamental");
    check_keys(f, origin, "fundamental",
               {"source", "csv_path", "mean_ticks", "reversion_rate_per_s",
                "vol_ticks_per_sqrt_s", "dt_s", "initial_ticks"});
    std::string source = get_as<std::string>(f, origin, "fundamental.source", "ou");
    if (source == "ou")
      cfg.fundamental.source = FundamentalConfig::Source::Ou;
    else if (source == "csv")
      cfg.fundamental.source = FundamentalConfig::Source::Csv;
    else
      fail(origin, "fundamental.source", "expected ou|csv");
    cfg.fundamental.csv_path =
        get_as<std::string>(f, origin, "fundamental.csv_path", "");
    OuParams& ou = cfg.fundamental.ou;
    ou.mean_ticks = get_as<double>(f, origin, "fundamental.mean_ticks", ou.mean_ticks);
    ou.reversion_rate_per_s = get_as<double>(
        f, origin, "fundamental.reversion_rate_per_s", ou.reversion_rate_per_s);
    ou.vol_ticks_per_sqrt_s = get_as<double>(
        f, origin, "fundamental.vol_ticks_per_sqrt_s", ou.vol_ticks_per_sqrt_s);
    ou.dt_s = get_as<double>(f, origin, "fundamental.dt_s", ou.dt_s);
    ou.initial_ticks =
        get_as<double>(f, origin, "fundamental.initial_ticks", ou.mean_ticks);
  }

  if (j.contains("volume_profile")) {
    const json& v = j.at("volume_profile");
    check_keys(v, origin, "volume_profile", {"csv_path", "buckets"});
    cfg.volume_profile.csv_path =
        get_as<std::string>(v, origin, "volume_profile.csv_path", "");
    cfg.volume_profile.buckets =
        get_as<int>(v, origin, "volume_profile.buckets", 13);
  }

  if (j.contains("agents")) {
    const json& a = j.at("agents");
    check_keys(a, origin, "agents",
               {"noise", "value", "market_maker", "twap", "vwap", "momentum",
                "mean_reversion"});
    if (a.contains("noise")) {
      const json& g = a.at("noise");
      check_keys(g, origin, "agents.noise", {"count", "q_min", "q_max"});
      parse_group_common(g, origin, "agents.noise", cfg.noise.count);
      cfg.noise.q_min = get_as<Qty>(g, origin, "agents.noise.q_min", cfg.noise.q_min);
      cfg.noise.q_max = get_as<Qty>(g, origin, "agents.noise.q_max", cfg.noise.q_max);
    }
    if (a.contains("value")) {
      const json& g = a.at("value");
      check_keys(g, origin, "agents.value",
                 {"count", "lambda_a_s", "delta_s", "q", "xi", "sigma_n"});
      parse_group_common(g, origin, "agents.value", cfg.value.count);
      cfg.value.lambda_a_s =
          get_as<double>(g, origin, "agents.value.lambda_a_s", cfg.value.lambda_a_s);
      cfg.value.delta_s = get_as<int>(g, origin, "agents.value.delta_s", cfg.value.delta_s);
      cfg.value.q = get_as<Qty>(g, origin, "agents.value.q", cfg.value.q);
      cfg.value.xi = get_as<double>(g, origin, "agents.value.xi", cfg.value.xi);
      cfg.value.sigma_n =
          get_as<double>(g, origin, "agents.value.sigma_n", cfg.value.sigma_n);
    }
    if (a.contains("market_maker")) {
      const json& g = a.at("market_maker");
      check_keys(g, origin, "agents.market_maker",
                 {"count", "lambda_a_s", "q_max", "delta_s"});
      parse_group_common(g, origin, "agents.market_maker", cfg.market_maker.count);
      cfg.market_maker.lambda_a_s = get_as<double>(
          g, origin, "agents.market_maker.lambda_a_s", cfg.market_maker.lambda_a_s);
      cfg.market_maker.q_max =
          get_as<Qty>(g, origin, "agents.market_maker.q_max", cfg.market_maker.q_max);
      cfg.market_maker.delta_s =
          get_as<int>(g, origin, "agents.market_maker.delta_s", cfg.market_maker.delta_s);
    }
    auto parse_taker = [&](const char* key, TakerGroup& group) {
      if (!a.contains(key)) return;
      const json& g = a.at(key);
      std::string prefix = std::string("agents.") + key;
      check_keys(g, origin, prefix, {"count", "parent_qty", "window_s", "n_slots"});
      parse_group_common(g, origin, prefix, group.count);
      group.parent_qty = get_as<Qty>(g, origin, prefix + ".parent_qty", group.parent_qty);
      group.window_s = get_as<double>(g, origin, prefix + ".window_s", group.window_s);
      group.n_slots = get_as<int>(g, origin, prefix + ".n_slots", group.n_slots);
    };
    parse_taker("twap", cfg.twap);
    parse_taker("vwap", cfg.vwap);
    auto parse_directional = [&](const char* key, DirectionalGroup& group) {
      if (!a.contains(key)) return;
      const json& g = a.at(key);
      std::string prefix = std::string("agents.") + key;
      check_keys(g, origin, prefix,
                 {"count", "q_max", "short_window_min", "long_window_min"});
      parse_group_common(g, origin, prefix, group.count);
      group.q_max = get_as<Qty>(g, origin, prefix + ".q_max", group.q_max);
      group.short_window_min =
          get_as<int>(g, origin, prefix + ".short_window_min", group.short_window_min);
      group.long_window_min =
          get_as<int>(g, origin, prefix + ".long_window_min", group.long_window_min);
    };
    parse_directional("momentum", cfg.momentum);
    parse_directional("mean_reversion", cfg.mean_reversion);
  }

  if (j.contains("book_seed_levels")) {
    const json& levels = j.at("book_seed_levels");
    if (!levels.is_array()) fail(origin, "book_seed_levels", "expected array");
    cfg.book_seed_levels.clear();
    for (const auto& level : levels) {
      if (!level.is_array() || level.size() != 2)
        fail(origin, "book_seed_levels", "each level must be [offset, qty]");
      cfg.book_seed_levels.emplace_back(level.at(0).get<Tick>(),
                                        level.at(1).get<Qty>());
    }
  }

  cfg.validate();
  return cfg;
}

std::string ScenarioConfig::to_json_text() const {
  json j;
  j["days"] = days;
  j["session_open"] = format_clock(session_open);
  j["session_close"] = format_clock(session_close);
  j["tick_size"] = tick_size;
  j["latency_ns"] = latency_ns;
  j["computation_delay_ns"] = computation_delay_ns;
  j["fundamental"]["source"] =
      fundamental.source == FundamentalConfig::Source::Ou ? "ou" : "csv";
  if (!fundamental.csv_path.empty())
    j["fundamental"]["csv_path"] = fundamental.csv_path;
  j["fundamental"]["mean_ticks"] = fundamental.ou.mean_ticks;
  j["fundamental"]["reversion_rate_per_s"] = fundamental.ou.reversion_rate_per_s;
  j["fundamental"]["vol_ticks_per_sqrt_s"] = fundamental.ou.vol_ticks_per_sqrt_s;
  j["fundamental"]["dt_s"] = fundamental.ou.dt_s;
  j["fundamental"]["initial_ticks"] = fundamental.ou.initial_ticks;
  if (!volume_profile.csv_path.empty())
    j["volume_profile"]["csv_path"] = volume_profile.csv_path;
  j["volume_profile"]["buckets"] = volume_profile.buckets;
  j["agents"]["noise"] = {{"count", noise.count},
                          {"q_min", noise.q_min},
                          {"q_max", noise.q_max}};
  j["agents"]["value"] = {{"count", value.count},
                          {"lambda_a_s", value.lambda_a_s},
                          {"delta_s", value.delta_s},
                          {"q", value.q},
                          {"xi", value.xi},
                          {"sigma_n", value.sigma_n}};
  j["agents"]["market_maker"] = {{"count", market_maker.count},
                                 {"lambda_a_s", market_maker.lambda_a_s},
                                 {"q_max", market_maker.q_max},
                                 {"delta_s", market_maker.delta_s}};
  j["agents"]["twap"] = {{"count", twap.count},
                         {"parent_qty", twap.parent_qty},
                         {"window_s", twap.window_s},
                         {"n_slots", twap.n_slots}};
  j["agents"]["vwap"] = {{"count", vwap.count},
                         {"parent_qty", vwap.parent_qty},
                         {"window_s", vwap.window_s},
                         {"n_slots", vwap.n_slots}};
  j["agents"]["momentum"] = {{"count", momentum.count},
                             {"q_max", momentum.q_max},
                             {"short_window_min", momentum.short_window_min},
                             {"long_window_min", momentum.long_window_min}};
  j["agents"]["mean_reversion"] = {
      {"count", mean_reversion.count},
      {"q_max", mean_reversion.q_max},
      {"short_window_min", mean_reversion.short_window_min},
      {"long_window_min", mean_reversion.long_window_min}};
  j["book_seed_levels"] = json::array();
  for (const auto& [offset, qty] : book_seed_levels)
    j["book_seed_levels"].push_back({offset, qty});
  if (master_seed) j["master_seed"] = *master_seed;
  return j.dump(2) + "\n";
}

void ScenarioConfig::validate() const {
  auto bad = [](const std::string& field, const std::string& what) {
    throw ConfigError("scenario config: field '", field, "': ", what);
  };
  if (days < 1) bad("days", "must be >= 1");
  if (session_open >= session_close)
    bad("session_open", "must precede session_close");
  if (session_close > kNsPerDay) bad("session_close", "beyond 24:00");
  if (tick_size <= 0) bad("tick_size", "must be positive");
  if (noise.count < 0) bad("agents.noise.count", "negative");
  if (value.count < 0) bad("agents.value.count", "negative");
  if (market_maker.count < 0) bad("agents.market_maker.count", "negative");
  if (twap.count < 0) bad("agents.twap.count", "negative");
  if (vwap.count < 0) bad("agents.vwap.count", "negative");
  if (momentum.count < 0) bad("agents.momentum.count", "negative");
  if (mean_reversion.count < 0) bad("agents.mean_reversion.count", "negative");
  if (noise.count > 0 && (noise.q_min <= 0 || noise.q_max < noise.q_min))
    bad("agents.noise.q_min", "need 0 < q_min <= q_max");
  if (value.count > 0) {
    if (value.lambda_a_s <= 0) bad("agents.value.lambda_a_s", "must be > 0");
    if (value.delta_s < 1) bad("agents.value.delta_s", "must be >= 1");
    if (value.q <= 0) bad("agents.value.q", "must be > 0");
    if (value.xi < 0 || value.xi > 1) bad("agents.value.xi", "must be in [0,1]");
    if (value.sigma_n < 0) bad("agents.value.sigma_n", "must be >= 0");
  }
  if (market_maker.count > 0) {
    if (market_maker.lambda_a_s <= 0)
      bad("agents.market_maker.lambda_a_s", "must be > 0");
    if (market_maker.q_max < 1) bad("agents.market_maker.q_max", "must be >= 1");
    if (market_maker.delta_s < 1)
      bad("agents.market_maker.delta_s", "must be >= 1");
  }
  SimTime session_len = session_close - session_open;
  auto check_taker = [&](const char* name, const TakerGroup& g) {
    if (g.count == 0) return;
    std::string prefix = std::string("agents.") + name;
    if (g.parent_qty <= 0) bad(prefix + ".parent_qty", "must be > 0");
    if (g.n_slots < 1) bad(prefix + ".n_slots", "must be >= 1");
    if (g.window_s <= 0) bad(prefix + ".window_s", "must be > 0");
    if (static_cast<SimTime>(g.window_s * 1e9) > session_len)
      bad(prefix + ".window_s", "window longer than the session");
  };
  check_taker("twap", twap);
  check_taker("vwap", vwap);
  auto check_directional = [&](const char* name, const DirectionalGroup& g) {
    if (g.count == 0) return;
    std::string prefix = std::string("agents.") + name;
    if (g.q_max < 1) bad(prefix + ".q_max", "must be >= 1");
    if (g.short_window_min < 1 || g.long_window_min <= g.short_window_min)
      bad(prefix + ".short_window_min", "need 1 <= short < long");
  };
  check_directional("momentum", momentum);
  check_directional("mean_reversion", mean_reversion);
  if (fundamental.source == FundamentalConfig::Source::Csv &&
      fundamental.csv_path.empty())
    bad("fundamental.csv_path", "required when source is csv");
  if (fundamental.source == FundamentalConfig::Source::Ou) {
    if (fundamental.ou.mean_ticks <= 0) bad("fundamental.mean_ticks", "must be > 0");
    if (fundamental.ou.dt_s <= 0) bad("fundamental.dt_s", "must be > 0");
    if (fundamental.ou.reversion_rate_per_s < 0)
      bad("fundamental.reversion_rate_per_s", "must be >= 0");
    if (fundamental.ou.vol_ticks_per_sqrt_s < 0)
      bad("fundamental.vol_ticks_per_sqrt_s", "must be >= 0");
  }
  if (volume_profile.csv_path.empty() && volume_profile.buckets < 2)
    bad("volume_profile.buckets", "must be >= 2");
  for (const auto& [offset, qty] : book_seed_levels)
    if (offset <= 0 || qty <= 0)
      bad("book_seed_levels", "offsets and quantities must be positive");
}

}  // namespace lobarena::scenario
