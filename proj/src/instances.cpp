#include "mmsr/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mmsr/rng.hpp"

namespace mmsr {

namespace {

// Processing-time fit per station: observed minimum, mean and maximum.
struct TimesRow {
  double min, mean, max;
};
constexpr TimesRow kTimesTable[5] = {
    {42.6, 94.1, 117.2},
    {7.9, 84.3, 197.9},
    {57.8, 96.2, 113.3},
    {26.9, 96.9, 109.7},
    {57.8, 96.2, 114.3},
};

double triangular(Rng& rng, double a, double m, double b) {
  if (b <= a) return a;
  double u = rng.uniform01();
  double fc = (m - a) / (b - a);
  if (u < fc) return a + std::sqrt(u * (b - a) * (m - a));
  return b - std::sqrt((1.0 - u) * (b - a) * (b - m));
}

tu_t draw_processing(Rng& rng, int station, bool is_ev) {
  const TimesRow& row = kTimesTable[station % 5];
  double v;
  if (station == 0) {
    // The battery station separates the fleet: EVs land in the upper third
    // of the observed range, the rest in a band of the lower portion chosen
    // to keep the station mean near the observed one.
    double cut = row.min + (row.max - row.min) * (2.0 / 3.0);
    v = is_ev ? rng.uniform(cut, row.max) : rng.uniform(80.0, cut);
  } else {
    double mode = 3.0 * row.mean - row.min - row.max;
    mode = std::clamp(mode, row.min, row.max);
    v = triangular(rng, row.min, mode, row.max);
  }
  tu_t t = tu_from_double(v);
  return std::clamp(t, tu_from_double(row.min), tu_from_double(row.max));
}

// Marks `count` distinct indices out of n, order-independent of later draws.
std::vector<char> pick_subset(Rng& rng, int n, int count) {
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  for (int i = 0; i < count && i < n; ++i) {
    int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(ids[i], ids[j]);
  }
  std::vector<char> mark(n, 0);
  for (int i = 0; i < count && i < n; ++i) mark[ids[i]] = 1;
  return mark;
}

int clamp_int(int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); }

double quantize6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

std::vector<std::string> GeneratorConfig::validate() const {
  std::vector<std::string> out;
  if (n_vehicles < 1) out.push_back("n_vehicles must be positive");
  if (n_stations < 1) out.push_back("n_stations must be positive");
  if (cycle <= 0) out.push_back("cycle must be positive");
  if (station_length < cycle || battery_station_length < cycle)
    out.push_back("station lengths must be at least the cycle");
  if (ev_ratio_lo > ev_ratio_hi || highrisk_ratio_lo > highrisk_ratio_hi ||
      highrisk_prob_lo > highrisk_prob_hi || lowrisk_prob_lo > lowrisk_prob_hi)
    out.push_back("a sampling range is inverted");
  if (fmax_fraction < 0.0) out.push_back("fmax_fraction must be non-negative");
  if (lambda < 1) out.push_back("lambda must be at least 1");
  if (lead_time < 1) out.push_back("lead_time must be at least 1");
  return out;
}

Instance generate_instance(const GeneratorConfig& cfg) {
  auto problems = cfg.validate();
  if (!problems.empty())
    throw std::invalid_argument("generator config rejected: " + problems.front());

  Rng rng(Rng::mix(cfg.seed, 0x4d4d5352u));  // instance stream
  Instance inst;
  char namebuf[64];
  std::snprintf(namebuf, sizeof(namebuf), "gen-v%d-s%llu", cfg.n_vehicles,
                static_cast<unsigned long long>(cfg.seed));
  inst.name = namebuf;
  inst.cycle = cfg.cycle;
  inst.lambda = cfg.lambda;
  inst.lead_time = cfg.lead_time;
  inst.fmax = cfg.fmax_override >= 0
                  ? cfg.fmax_override
                  : static_cast<int>(cfg.fmax_fraction * cfg.n_vehicles);

  for (int k = 0; k < cfg.n_stations; ++k)
    inst.stations.push_back(
        {k, k == 0 ? cfg.battery_station_length : cfg.station_length});

  const int n = cfg.n_vehicles;
  int ev_count = static_cast<int>(
      std::llround(rng.uniform(cfg.ev_ratio_lo, cfg.ev_ratio_hi) * n));
  int hr_count = static_cast<int>(
      std::llround(rng.uniform(cfg.highrisk_ratio_lo, cfg.highrisk_ratio_hi) * n));
  auto is_ev = pick_subset(rng, n, ev_count);
  auto is_hr = pick_subset(rng, n, hr_count);

  int r_new_lo = cfg.r_new_lo >= 0 ? cfg.r_new_lo : clamp_int(10, 0, std::max(0, n - 10));
  int r_new_hi = cfg.r_new_hi >= 0 ? cfg.r_new_hi : std::max(r_new_lo, n - 10);
  int r_old_lo = cfg.r_old_lo >= 0 ? cfg.r_old_lo : 0;
  int r_old_hi = cfg.r_old_hi >= 0 ? cfg.r_old_hi : std::max(r_old_lo, n - 10);

  for (int v = 0; v < n; ++v) {
    Vehicle veh;
    veh.id = v;
    veh.is_ev = is_ev[v] != 0;
    veh.risk = is_hr[v] ? RiskClass::kHigh : RiskClass::kLow;
    veh.failure_prob = quantize6(
        is_hr[v] ? rng.uniform(cfg.highrisk_prob_lo, cfg.highrisk_prob_hi)
                 : rng.uniform(cfg.lowrisk_prob_lo, cfg.lowrisk_prob_hi));
    veh.ready_offset = rng.uniform_int(r_new_lo, std::max(r_new_lo, r_new_hi));
    veh.processing.resize(cfg.n_stations);
    for (int k = 0; k < cfg.n_stations; ++k)
      veh.processing[k] = draw_processing(rng, k, veh.is_ev);
    inst.vehicles.push_back(std::move(veh));
  }

  for (int j = 0; j < inst.fmax; ++j) {
    OldFailedVehicle old;
    old.vehicle.id = n + j;
    // The EV draw only shapes the processing times; the flag itself is not
    // part of the pool schema.
    bool ev = rng.bernoulli(0.5 * (cfg.ev_ratio_lo + cfg.ev_ratio_hi));
    old.vehicle.ready_offset = rng.uniform_int(r_old_lo, std::max(r_old_lo, r_old_hi));
    old.vehicle.processing.resize(cfg.n_stations);
    for (int k = 0; k < cfg.n_stations; ++k)
      old.vehicle.processing[k] = draw_processing(rng, k, ev);
    old.wait_days = rng.uniform_int(1, cfg.lead_time);
    old.slack_days = rng.uniform_int(old.wait_days, cfg.lead_time);
    inst.old_pool.push_back(std::move(old));
  }

  return inst;
}

ScenarioSample sample_scenarios(const Instance& inst, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample size must be at least 1");
  Rng rng(Rng::mix(seed, 0x53414d50u));  // sample stream
  ScenarioSample sample;
  sample.seed = seed;
  sample.scenarios.reserve(n);
  const int nv = inst.num_positions();
  for (int s = 0; s < n; ++s) {
    Scenario sc;
    sc.exists.assign(nv, 1);
    for (int v = 0; v < nv; ++v) {
      if (inst.vehicles[v].risk == RiskClass::kHigh &&
          rng.bernoulli(inst.vehicles[v].failure_prob))
        sc.exists[v] = 0;
    }
    if (inst.fmax > 0) {
      int m = rng.uniform_int(0, inst.fmax);
      auto mark = pick_subset(rng, inst.fmax, m);
      for (int j = 0; j < inst.fmax; ++j)
        if (mark[j]) sc.old_present.push_back(j);
    }
    sample.scenarios.push_back(std::move(sc));
  }
  return sample;
}

ScenarioSample one_scenario_sample(const Instance& inst) {
  ScenarioSample sample;
  sample.seed = 0;
  Scenario sc;
  sc.exists.assign(inst.num_positions(), 1);
  sample.scenarios.push_back(std::move(sc));
  return sample;
}

double scenario_probability(const Instance& inst, const Scenario& scenario) {
  double p = 1.0 / (inst.fmax + 1);
  for (size_t v = 0; v < inst.vehicles.size(); ++v) {
    double f = inst.vehicles[v].failure_prob;
    p *= scenario.exists[v] ? (1.0 - f) : f;
  }
  return p;
}

std::vector<FailedVehicle> failed_vehicles(const Instance& inst,
                                           const Scenario& scenario) {
  std::vector<FailedVehicle> out;
  for (size_t v = 0; v < inst.vehicles.size(); ++v) {
    if (!scenario.exists[v]) {
      const Vehicle& veh = inst.vehicles[v];
      out.push_back({veh.id, false, -1, veh.ready_offset, 0, false, &veh});
    }
  }
  for (int idx : scenario.old_present) {
    const OldFailedVehicle& old = inst.old_pool.at(idx);
    out.push_back({old.vehicle.id, true, idx, old.vehicle.ready_offset,
                   old.wait_days, old.due(), &old.vehicle});
  }
  return out;
}

// ---------------------------------------------------------------------------
// File formats

namespace {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

struct LineReader {
  std::ifstream in;
  std::string path;
  int lineno = 0;

  explicit LineReader(const std::string& p) : in(p), path(p) {
    if (!in) throw std::runtime_error("cannot open " + p);
  }

  std::istringstream expect(const std::string& keyword) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::istringstream is(line);
      std::string head;
      is >> head;
      if (head != keyword)
        fail(path, lineno, "expected field '" + keyword + "', found '" + head + "'");
      return is;
    }
    fail(path, lineno, "missing field '" + keyword + "'");
  }
};

long long parse_int_field(std::istringstream& is, LineReader& r, const char* field) {
  long long v;
  if (!(is >> v)) fail(r.path, r.lineno, std::string("bad value for ") + field);
  return v;
}

tu_t parse_tu_field(std::istringstream& is, LineReader& r, const char* field) {
  std::string tok;
  if (!(is >> tok)) fail(r.path, r.lineno, std::string("missing value for ") + field);
  auto v = tu_parse(tok);
  if (!v) fail(r.path, r.lineno, std::string("bad time value for ") + field);
  return *v;
}

std::string basename_no_ext(const std::string& path) {
  size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace

void write_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "MMSR v1\n";
  out << "cycle " << tu_to_string(inst.cycle) << "\n";
  out << "lambda " << inst.lambda << "\n";
  out << "fmax " << inst.fmax << "\n";
  out << "leadtime " << inst.lead_time << "\n";
  out << "stations " << inst.num_stations() << "\n";
  for (const auto& s : inst.stations)
    out << "station " << s.id << " " << tu_to_string(s.length) << "\n";
  out << "vehicles " << inst.num_positions() << "\n";
  for (const auto& v : inst.vehicles) {
    out << "vehicle " << v.id << " " << (v.is_ev ? 1 : 0) << " "
        << (v.risk == RiskClass::kHigh ? "high" : "low") << " "
        << format_double(v.failure_prob) << " " << v.ready_offset;
    for (tu_t p : v.processing) out << " " << tu_to_string(p);
    out << "\n";
  }
  out << "oldpool " << inst.old_pool.size() << "\n";
  for (const auto& o : inst.old_pool) {
    out << "old " << o.vehicle.id << " " << o.wait_days << " " << o.slack_days
        << " " << o.vehicle.ready_offset;
    for (tu_t p : o.vehicle.processing) out << " " << tu_to_string(p);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

Instance load_instance(const std::string& path) {
  LineReader r(path);
  {
    auto is = r.expect("MMSR");
    std::string version;
    is >> version;
    if (version != "v1") fail(path, r.lineno, "unsupported version '" + version + "'");
  }
  Instance inst;
  inst.name = basename_no_ext(path);
  {
    auto is = r.expect("cycle");
    inst.cycle = parse_tu_field(is, r, "cycle");
  }
  {
    auto is = r.expect("lambda");
    inst.lambda = static_cast<int>(parse_int_field(is, r, "lambda"));
  }
  {
    auto is = r.expect("fmax");
    inst.fmax = static_cast<int>(parse_int_field(is, r, "fmax"));
  }
  {
    auto is = r.expect("leadtime");
    inst.lead_time = static_cast<int>(parse_int_field(is, r, "leadtime"));
  }
  int n_stations = 0;
  {
    auto is = r.expect("stations");
    n_stations = static_cast<int>(parse_int_field(is, r, "stations"));
  }
  for (int k = 0; k < n_stations; ++k) {
    auto is = r.expect("station");
    Station s;
    s.id = static_cast<int>(parse_int_field(is, r, "station id"));
    s.length = parse_tu_field(is, r, "station length");
    inst.stations.push_back(s);
  }
  int n_vehicles = 0;
  {
    auto is = r.expect("vehicles");
    n_vehicles = static_cast<int>(parse_int_field(is, r, "vehicles"));
  }
  for (int i = 0; i < n_vehicles; ++i) {
    auto is = r.expect("vehicle");
    Vehicle v;
    v.id = static_cast<int>(parse_int_field(is, r, "vehicle id"));
    v.is_ev = parse_int_field(is, r, "ev flag") != 0;
    std::string risk;
    if (!(is >> risk) || (risk != "low" && risk != "high"))
      fail(path, r.lineno, "bad risk class");
    v.risk = risk == "high" ? RiskClass::kHigh : RiskClass::kLow;
    std::string prob;
    if (!(is >> prob)) fail(path, r.lineno, "missing failure probability");
    v.failure_prob = std::strtod(prob.c_str(), nullptr);
    v.ready_offset = static_cast<int>(parse_int_field(is, r, "ready offset"));
    for (int k = 0; k < n_stations; ++k)
      v.processing.push_back(parse_tu_field(is, r, "processing time"));
    inst.vehicles.push_back(std::move(v));
  }
  int n_old = 0;
  {
    auto is = r.expect("oldpool");
    n_old = static_cast<int>(parse_int_field(is, r, "oldpool"));
  }
  for (int i = 0; i < n_old; ++i) {
    auto is = r.expect("old");
    OldFailedVehicle o;
    o.vehicle.id = static_cast<int>(parse_int_field(is, r, "old id"));
    o.wait_days = static_cast<int>(parse_int_field(is, r, "wait days"));
    o.slack_days = static_cast<int>(parse_int_field(is, r, "slack days"));
    o.vehicle.ready_offset = static_cast<int>(parse_int_field(is, r, "ready offset"));
    for (int k = 0; k < n_stations; ++k)
      o.vehicle.processing.push_back(parse_tu_field(is, r, "processing time"));
    inst.old_pool.push_back(std::move(o));
  }
  return inst;
}

void write_sample(const ScenarioSample& sample, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "SAMPLE v1\n";
  out << "n " << sample.size() << "\n";
  out << "seed " << sample.seed << "\n";
  for (int s = 0; s < sample.size(); ++s) {
    const Scenario& sc = sample.scenarios[s];
    out << "scenario " << s << " fails:";
    bool first = true;
    for (size_t v = 0; v < sc.exists.size(); ++v) {
      if (!sc.exists[v]) {
        if (!first) out << ",";
        out << v;
        first = false;
      }
    }
    out << " old:";
    first = true;
    for (int idx : sc.old_present) {
      if (!first) out << ",";
      out << idx;
      first = false;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

namespace {

std::vector<int> parse_id_list(const std::string& tok, const std::string& prefix,
                               LineReader& r) {
  if (tok.rfind(prefix, 0) != 0)
    fail(r.path, r.lineno, "expected '" + prefix + "...' token");
  std::vector<int> out;
  std::string rest = tok.substr(prefix.size());
  size_t pos = 0;
  while (pos < rest.size()) {
    size_t comma = rest.find(',', pos);
    std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
    if (!item.empty()) out.push_back(std::atoi(item.c_str()));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

ScenarioSample load_sample(const std::string& path, const Instance& inst) {
  LineReader r(path);
  {
    auto is = r.expect("SAMPLE");
    std::string version;
    is >> version;
    if (version != "v1") fail(path, r.lineno, "unsupported version '" + version + "'");
  }
  ScenarioSample sample;
  int n = 0;
  {
    auto is = r.expect("n");
    n = static_cast<int>(parse_int_field(is, r, "n"));
  }
  {
    auto is = r.expect("seed");
    unsigned long long s;
    if (!(is >> s)) fail(path, r.lineno, "bad seed");
    sample.seed = s;
  }
  for (int i = 0; i < n; ++i) {
    auto is = r.expect("scenario");
    parse_int_field(is, r, "scenario index");
    std::string fails_tok, old_tok;
    if (!(is >> fails_tok >> old_tok)) fail(path, r.lineno, "truncated scenario line");
    Scenario sc;
    sc.exists.assign(inst.num_positions(), 1);
    for (int v : parse_id_list(fails_tok, "fails:", r)) {
      if (v < 0 || v >= inst.num_positions())
        fail(path, r.lineno, "failed vehicle id out of range");
      sc.exists[v] = 0;
    }
    sc.old_present = parse_id_list(old_tok, "old:", r);
    for (int idx : sc.old_present)
      if (idx < 0 || idx >= inst.fmax)
        fail(path, r.lineno, "old pool index out of range");
    std::sort(sc.old_present.begin(), sc.old_present.end());
    sample.scenarios.push_back(std::move(sc));
  }
  return sample;
}

bool instances_equal(const Instance& a, const Instance& b) {
  auto veh_eq = [](const Vehicle& x, const Vehicle& y) {
    return x.id == y.id && x.processing == y.processing &&
           x.failure_prob == y.failure_prob && x.risk == y.risk &&
           x.ready_offset == y.ready_offset && x.is_ev == y.is_ev;
  };
  if (a.cycle != b.cycle || a.fmax != b.fmax || a.lambda != b.lambda ||
      a.lead_time != b.lead_time)
    return false;
  if (a.stations.size() != b.stations.size() || a.vehicles.size() != b.vehicles.size() ||
      a.old_pool.size() != b.old_pool.size())
    return false;
  for (size_t i = 0; i < a.stations.size(); ++i)
    if (a.stations[i].id != b.stations[i].id || a.stations[i].length != b.stations[i].length)
      return false;
  for (size_t i = 0; i < a.vehicles.size(); ++i)
    if (!veh_eq(a.vehicles[i], b.vehicles[i])) return false;
  for (size_t i = 0; i < a.old_pool.size(); ++i) {
    if (!veh_eq(a.old_pool[i].vehicle, b.old_pool[i].vehicle)) return false;
    if (a.old_pool[i].wait_days != b.old_pool[i].wait_days ||
        a.old_pool[i].slack_days != b.old_pool[i].slack_days)
      return false;
  }
  return true;
}

}  // namespace mmsr
