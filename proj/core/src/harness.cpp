#include "wmstat/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wmstat/agnostic.hpp"
#include "wmstat/error.hpp"
#include "wmstat/product_rates.hpp"
#include "wmstat/rng.hpp"
#include "wmstat/robust.hpp"
#include "wmstat/schemes.hpp"
#include "wmstat/toy_lm.hpp"
#include "wmstat/ump.hpp"

namespace wmstat {
namespace {

constexpr double kUnbounded = 1e300;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    out.push_back(trim(std::string_view(s).substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::optional<double> to_real(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(x)) return {};
  return x;
}

std::optional<std::int64_t> to_int(const std::string& s) {
  std::int64_t x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return {};
  return x;
}

std::optional<bool> to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  return {};
}

void check_range(const ParamSpec& spec, double x) {
  const bool below = spec.lo_open ? x <= spec.lo : x < spec.lo;
  const bool above = spec.hi_open ? x >= spec.hi : x > spec.hi;
  if (below || above) {
    std::ostringstream os;
    os << "parameter '" << spec.name << "' = " << x << " is outside " << (spec.lo_open ? '(' : '[')
       << spec.lo << ", " << spec.hi << (spec.hi_open ? ')' : ']');
    throw ConfigError(spec.name, os.str());
  }
}

void check_value(const ParamSpec& spec, const std::string& raw) {
  auto bad = [&](const char* what) {
    throw ConfigError(spec.name, "parameter '" + spec.name + "' = '" + raw + "' is not " + what);
  };
  switch (spec.kind) {
    case ParamKind::kReal: {
      const auto x = to_real(raw);
      if (!x) bad("a real number");
      check_range(spec, *x);
      break;
    }
    case ParamKind::kInt: {
      const auto x = to_int(raw);
      if (!x) bad("an integer");
      check_range(spec, static_cast<double>(*x));
      break;
    }
    case ParamKind::kRealList:
      for (const auto& item : split_list(raw)) {
        const auto x = to_real(item);
        if (!x) bad("a comma separated list of real numbers");
        check_range(spec, *x);
      }
      break;
    case ParamKind::kIntList:
      for (const auto& item : split_list(raw)) {
        const auto x = to_int(item);
        if (!x) bad("a comma separated list of integers");
        check_range(spec, static_cast<double>(*x));
      }
      break;
    case ParamKind::kBool:
      if (!to_bool(raw)) bad("a boolean");
      break;
    case ParamKind::kString:
      break;
  }
}

// Schema-resolved parameters: defaults filled in, every value validated.
class Params {
 public:
  Params(const ExperimentInfo& info, const ParamMap& raw) {
    for (const auto& spec : info.params) {
      const auto it = raw.find(spec.name);
      values_[spec.name] = it == raw.end() ? spec.default_value : trim(it->second);
    }
  }

  double real(const std::string& k) const { return *to_real(values_.at(k)); }
  std::int64_t integer(const std::string& k) const { return *to_int(values_.at(k)); }
  bool boolean(const std::string& k) const { return *to_bool(values_.at(k)); }
  const std::string& str(const std::string& k) const { return values_.at(k); }
  std::vector<double> reals(const std::string& k) const {
    std::vector<double> out;
    for (const auto& s : split_list(values_.at(k))) out.push_back(*to_real(s));
    return out;
  }
  std::vector<std::int64_t> integers(const std::string& k) const {
    std::vector<std::int64_t> out;
    for (const auto& s : split_list(values_.at(k))) out.push_back(*to_int(s));
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
};

ParamSpec real_param(std::string name, std::string def, double lo, double hi, bool lo_open,
                     bool hi_open, std::string help) {
  return {std::move(name), ParamKind::kReal, std::move(def), lo, hi, lo_open, hi_open, std::move(help)};
}

ParamSpec typed(ParamKind kind, std::string name, std::string def, double lo, double hi,
                std::string help) {
  return {std::move(name), kind, std::move(def), lo, hi, false, false, std::move(help)};
}

ParamSpec string_param(std::string name, std::string def, std::string help) {
  return {std::move(name), ParamKind::kString, std::move(def), -kUnbounded, kUnbounded,
          false, false, std::move(help)};
}

// Runs fn(i) for i in [0, n), striding indices across workers. Callers write
// results into slot i, so the output is independent of the worker count.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  const unsigned nw = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(nw);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < nw; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += nw) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

DiscreteDist dist_param(const Params& p, const std::string& key) {
  try {
    return DiscreteDist(p.reals(key));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, "parameter '" + key + "': " + e.what());
  }
}

// alpha must be m / n with m | n.
EtaStar eta_star_param(std::int64_t n, double alpha, const std::string& key) {
  const auto m = static_cast<std::int64_t>(std::llround(alpha * static_cast<double>(n)));
  if (m < 1 || m > n || n % m != 0 ||
      std::abs(static_cast<double>(m) / static_cast<double>(n) - alpha) > 1e-12) {
    throw ConfigError(key, "parameter '" + key +
                               "': alpha * n and 1 / alpha must both be integers");
  }
  return EtaStar(n, m);
}

// --- ump ---------------------------------------------------------------------

CsvTable run_ump(const Params& p, std::uint64_t) {
  const DiscreteDist rho = dist_param(p, "rho");
  CsvTable t;
  t.header = {"alpha", "eps", "beta_closed_form", "type1", "type2", "beta_oracle"};
  for (double eps : p.reals("eps")) {
    for (double alpha : p.reals("alpha")) {
      const Coupling c = ump_build(rho, alpha, eps);
      const std::string oracle =
          eps == 0.0 && rho.size() <= 4 ? format_number(ump_oracle(rho, alpha)) : "";
      t.add_row({format_number(alpha), format_number(eps),
                 format_number(ump_type2_closed_form(rho, alpha, eps)),
                 format_number(type1_exact(c)), format_number(type2_exact(c)), oracle});
    }
  }
  return t;
}

// --- rates -------------------------------------------------------------------

CsvTable run_rates(const Params& p, std::uint64_t) {
  const double h = p.real("h");
  const double alpha = p.real("alpha");
  const double beta = p.real("beta");
  const RateBounds b = rate_bounds(h, alpha, beta, p.integer("k"));
  const RequiredTokens req =
      n_required_empirical(hard_instance(h), alpha, beta, p.integer("n_max"), p.boolean("full_scan"));
  CsvTable t;
  t.header = {"n", "beta_exact", "lower", "upper"};
  const std::string lower = format_number(b.lower);
  const std::string upper = format_number(b.upper);
  for (const auto& e : req.curve.entries) {
    t.add_row({format_number(e.n), format_number(e.beta), lower, upper});
  }
  return t;
}

// --- agnostic ----------------------------------------------------------------

CsvTable run_agnostic(const Params& p, std::uint64_t seed, unsigned workers) {
  CsvTable t;
  t.header = {"kind", "n", "m", "gamma", "gamma_limit_gap", "excess", "loss", "bound", "strassen"};

  const double ga = p.real("gamma_alpha");
  for (std::int64_t n : p.integers("gamma_n")) {
    const EtaStar es = eta_star_param(n, ga, "gamma_alpha");
    const ExactRational g = gamma_star(es);
    t.add_row({"gamma", format_number(n), format_number(es.m_alpha()), format_number(g.get_d()),
               format_number(gamma_limit_check(es.alpha(), n)), "", "", "", ""});
  }

  const std::int64_t n = p.integer("n");
  const EtaStar es = eta_star_param(n, p.real("alpha"), "alpha");
  const double gamma = gamma_star(es).get_d();
  const auto instances = static_cast<std::size_t>(p.integer("instances"));
  const double sharpness = p.real("sharpness");

  struct Row {
    std::string kind;
    DiscreteDist rho = DiscreteDist::uniform(1);
    double excess = 0.0;
    double loss = 0.0;
    double bound = 0.0;
    bool strassen = false;
  };
  std::vector<Row> rows(instances + 1);
  {
    std::vector<double> half(static_cast<std::size_t>(n), 0.0);
    const std::size_t support = static_cast<std::size_t>(std::max<std::int64_t>(1, n / 2));
    for (std::size_t i = 0; i < support; ++i) half[i] = 1.0 / static_cast<double>(support);
    rows[0] = {"uniform_half", DiscreteDist::normalized(std::move(half))};
  }
  for (std::size_t i = 0; i < instances; ++i) {
    RngStream rng = rng_stream(seed, i);
    rows[i + 1] = {"random", random_distribution(static_cast<std::size_t>(n), rng, sharpness)};
  }
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    Row& r = rows[i];
    r.loss = build_agnostic_coupling(r.rho, es).loss;
    r.bound = agnostic_budget(r.rho, es);
    r.excess = strassen_max_excess(r.rho, es);
    r.strassen = strassen_check(r.rho, es, r.bound);
  });
  for (const Row& r : rows) {
    t.add_row({r.kind, format_number(n), format_number(es.m_alpha()), format_number(gamma), "",
               format_number(r.excess), format_number(r.loss), format_number(r.bound),
               r.strassen ? "1" : "0"});
  }
  return t;
}

// --- robust ------------------------------------------------------------------

CsvTable run_robust(const Params& p, std::uint64_t seed, unsigned workers) {
  const std::string& file = p.str("graph_file");
  const PerturbationGraph g = [&] {
    if (!file.empty()) {
      try {
        return load_edge_list(file, &std::cerr);
      } catch (const std::runtime_error& e) {
        throw ConfigError("graph_file", std::string("parameter 'graph_file': ") + e.what());
      }
    }
    return hamming_graph(static_cast<std::size_t>(p.integer("k")),
                         static_cast<std::size_t>(p.integer("len")),
                         static_cast<std::size_t>(p.integer("c")));
  }();
  const double alpha = p.real("alpha");
  const double sharpness = p.real("sharpness");
  const auto instances = static_cast<std::size_t>(p.integer("instances"));

  struct Row {
    double beta = 0.0;
    double beta_sum = 0.0;
    double beta_plain = 0.0;
  };
  std::vector<Row> rows(instances);
  parallel_for(instances, workers, [&](std::size_t i) {
    RngStream rng = rng_stream(seed, i);
    const DiscreteDist rho = random_distribution(g.size(), rng, sharpness);
    rows[i] = {robust_solve(rho, alpha, g, false).beta, robust_solve(rho, alpha, g, true).beta,
               ump_type2_closed_form(rho, alpha)};
  });
  CsvTable t;
  t.header = {"instance", "vertices", "edges", "alpha", "beta", "beta_sum_row", "beta_unperturbed"};
  for (std::size_t i = 0; i < instances; ++i) {
    t.add_row({format_number(i), format_number(g.size()), format_number(g.edge_count()),
               format_number(alpha), format_number(rows[i].beta), format_number(rows[i].beta_sum),
               format_number(rows[i].beta_plain)});
  }
  return t;
}

// --- schemes -----------------------------------------------------------------

ToyLM lm_param(const Params& p, std::uint64_t seed) {
  const std::string& kind = p.str("lm");
  const auto vocab = static_cast<std::size_t>(p.integer("vocab"));
  if (kind == "uniform") return ToyLM::uniform(vocab);
  if (kind == "fair_coin") return ToyLM::fair_coin();
  if (kind == "deterministic") return ToyLM::deterministic(vocab);
  if (kind == "random_markov") {
    return ToyLM::random_markov(vocab, p.real("sharpness"), derive_seed(seed, 0x6c6d));
  }
  if (kind == "file") {
    if (p.str("lm_file").empty()) throw ConfigError("lm_file", "lm=file needs lm_file");
    try {
      return load_toy_lm(p.str("lm_file"));
    } catch (const std::exception& e) {
      throw ConfigError("lm_file", std::string("parameter 'lm_file': ") + e.what());
    }
  }
  throw ConfigError("lm", "parameter 'lm' = '" + kind +
                              "' is not one of uniform, fair_coin, deterministic, random_markov, file");
}

std::vector<std::string> scheme_list(const Params& p, const ToyLM& lm) {
  const std::string& raw = p.str("schemes");
  if (raw == "auto") {
    if (lm.vocab_size() == 2) return {"srl", "christ", "its", "ump"};
    return {"srl", "its", "ump"};
  }
  std::vector<std::string> out = split_list(raw);
  for (const auto& s : out) {
    if (s != "srl" && s != "christ" && s != "its" && s != "ump") {
      throw ConfigError("schemes", "parameter 'schemes': unknown scheme '" + s + "'");
    }
    if (s == "christ" && lm.vocab_size() != 2) {
      throw ConfigError("schemes", "parameter 'schemes': christ needs a binary LM");
    }
  }
  return out;
}

CsvTable run_schemes(const Params& p, std::uint64_t seed, unsigned workers) {
  const ToyLM lm = lm_param(p, seed);
  const auto names = scheme_list(p, lm);
  const std::int64_t trials = p.integer("trials");
  CsvTable t;
  t.header = {"scheme", "n", "alpha", "type1_hat", "type1_se", "type2_hat", "type2_se"};
  std::uint64_t row = 0;
  for (const auto& name : names) {
    for (std::int64_t n : p.integers("n")) {
      for (double alpha : p.reals("alpha")) {
        SchemeConfig cfg;
        cfg.target_alpha = alpha;
        cfg.length = n;
        if (name == "srl") {
          cfg.variant = SoftRedListParams{p.real("gamma_green"), p.real("delta")};
        } else if (name == "christ") {
          cfg.variant = ChristBinaryParams{p.real("lambda")};
        } else if (name == "its") {
          if (p.integer("block_k") > n) {
            throw ConfigError("block_k", "parameter 'block_k' exceeds the text length n");
          }
          cfg.variant = InverseTransformParams{p.integer("its_T"), p.integer("block_k"),
                                               p.boolean("shared_permutation")};
        } else {
          cfg.variant = UmpBaselineParams{};
        }
        const ErrorEstimate e = estimate_errors(lm, cfg, trials, derive_seed(seed, row++), workers);
        t.add_row({name, format_number(n), format_number(alpha), format_number(e.type1),
                   format_number(e.type1_stderr), format_number(e.type2),
                   format_number(e.type2_stderr)});
      }
    }
  }
  return t;
}

std::vector<ExperimentInfo> make_registry() {
  using K = ParamKind;
  std::vector<ExperimentInfo> r;
  r.push_back({"ump",
               "Type II error of the optimal watermark versus alpha and eps",
               {
                   typed(K::kRealList, "rho", "0.5,0.25,0.15,0.1", 0.0, 1.0, "model law"),
                   typed(K::kRealList, "alpha", "0.01,0.05,0.1,0.15,0.2,0.25,0.3,0.4,0.5", 0.0, 1.0,
                         "Type I levels"),
                   typed(K::kRealList, "eps", "0,0.05,0.1", 0.0, 1.0, "TV distortion budgets"),
               }});
  r.back().params[1].lo_open = r.back().params[1].hi_open = true;
  r.push_back({"rates",
               "Exact Type II error on the two-point hard instance against the token bounds",
               {
                   real_param("h", "0.1", 0.0, 0.25, true, true, "per-token entropy (nats)"),
                   real_param("alpha", "0.01", 0.0, 0.1, true, true, "Type I level"),
                   real_param("beta", "0.01", 0.0, 0.1, true, true, "target Type II error"),
                   typed(K::kInt, "n_max", "100000", 1, 100000, "longest text scanned"),
                   typed(K::kInt, "k", "2", 2, 1e9, "alphabet size used by the upper bound"),
                   typed(K::kBool, "full_scan", "false", 0, 0, "continue past the crossing"),
               }});
  r.push_back({"agnostic",
               "Minimax model-agnostic loss: gamma table and max-flow couplings",
               {
                   typed(K::kInt, "n", "8", 2, 20, "outcome count for coupling instances"),
                   real_param("alpha", "0.25", 0.0, 1.0, true, false, "level (alpha n and 1/alpha integral)"),
                   typed(K::kInt, "instances", "50", 0, 10000, "random model laws"),
                   real_param("sharpness", "2", 0.0, 50.0, false, false, "concentration of random laws"),
                   typed(K::kIntList, "gamma_n", "100,1000,10000", 1, 100000, "n values for the gamma table"),
                   real_param("gamma_alpha", "0.01", 0.0, 1.0, true, false, "level for the gamma table"),
               }});
  r.push_back({"robust",
               "Robust LP optimum under both readings of the sum row",
               {
                   typed(K::kInt, "k", "2", 2, 16, "alphabet of the Hamming graph"),
                   typed(K::kInt, "len", "3", 1, 16, "string length of the Hamming graph"),
                   typed(K::kInt, "c", "1", 0, 16, "edit radius"),
                   real_param("alpha", "0.1", 0.0, 1.0, true, true, "Type I level"),
                   typed(K::kInt, "instances", "20", 1, 10000, "random model laws"),
                   real_param("sharpness", "1", 0.0, 50.0, false, false, "concentration of random laws"),
                   string_param("graph_file", "", "edge list replacing the Hamming graph"),
               }});
  r.push_back({"schemes",
               "Empirical Type I/II errors of the reference schemes and the UMP baseline",
               {
                   string_param("lm", "uniform", "uniform | fair_coin | deterministic | random_markov | file"),
                   typed(K::kInt, "vocab", "8", 2, 4096, "vocabulary size"),
                   real_param("sharpness", "1", 0.0, 50.0, false, false, "random_markov concentration"),
                   string_param("lm_file", "", "ToyLM file for lm=file"),
                   typed(K::kIntList, "n", "50,100,200", 1, 100000, "text lengths"),
                   typed(K::kRealList, "alpha", "0.01,0.05", 0.0, 1.0, "target Type I levels"),
                   typed(K::kInt, "trials", "200", 100, 10000000, "keys per estimate"),
                   string_param("schemes", "auto", "comma list of srl, christ, its, ump"),
                   real_param("gamma_green", "0.5", 0.0, 1.0, true, true, "green list fraction"),
                   real_param("delta", "2", 0.0, 50.0, false, false, "green boost"),
                   real_param("lambda", "4", 0.0, 1e6, false, false, "entropy budget of the prefix"),
                   typed(K::kInt, "its_T", "99", 1, 100000, "permutation test resamples"),
                   typed(K::kInt, "block_k", "10", 1, 100000, "alignment window"),
                   typed(K::kBool, "shared_permutation", "true", 0, 0, "one permutation per text"),
               }});
  for (auto& p : r.back().params) {
    if (p.name == "alpha") p.lo_open = p.hi_open = true;
  }
  return r;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> registry = make_registry();
  return registry;
}

const ExperimentInfo& find_experiment(std::string_view name) {
  for (const auto& e : experiment_registry()) {
    if (e.name == name) return e;
  }
  std::string known;
  for (const auto& e : experiment_registry()) known += (known.empty() ? "" : ", ") + e.name;
  throw ConfigError("experiment",
                    "unknown experiment '" + std::string(name) + "' (known: " + known + ")");
}

ParamMap parse_config(std::istream& in) {
  ParamMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno),
                        "config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno),
                        "config line " + std::to_string(lineno) + ": empty key");
    }
    if (!out.emplace(key, trim(std::string_view(body).substr(eq + 1))).second) {
      throw ConfigError(key, "config key '" + key + "' is repeated");
    }
  }
  return out;
}

ParamMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file '" + path + "'");
  return parse_config(in);
}

ParamMap merge_params(ParamMap base, const ParamMap& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

void validate_config(const ExperimentConfig& cfg) {
  const ExperimentInfo& info = find_experiment(cfg.experiment);
  for (const auto& [key, value] : cfg.params) {
    const auto it = std::find_if(info.params.begin(), info.params.end(),
                                 [&](const ParamSpec& s) { return s.name == key; });
    if (it == info.params.end()) {
      throw ConfigError(key, "unknown parameter '" + key + "' for experiment '" + info.name + "'");
    }
    check_value(*it, trim(value));
  }
}

CsvTable run(const ExperimentConfig& cfg, unsigned workers) {
  validate_config(cfg);
  const ExperimentInfo& info = find_experiment(cfg.experiment);
  const Params p(info, cfg.params);
  if (info.name == "ump") return run_ump(p, cfg.seed);
  if (info.name == "rates") return run_rates(p, cfg.seed);
  if (info.name == "agnostic") return run_agnostic(p, cfg.seed, workers);
  if (info.name == "robust") return run_robust(p, cfg.seed, workers);
  return run_schemes(p, cfg.seed, workers);
}

}  // namespace wmstat
