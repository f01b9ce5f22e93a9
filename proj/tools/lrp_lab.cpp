// lrp-lab: command line driver for the percolation experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <new>
#include <sstream>
#include <thread>

#include "lrp/lrp.hpp"
#include "lrp/parallel.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { ok = 0, runtime = 1, argument = 2, resource = 3, verify_failed = 4, io = 5 };

int exit_code(lrp::ErrorKind k) {
  switch (k) {
    case lrp::ErrorKind::invalid_argument:
    case lrp::ErrorKind::precondition:
    case lrp::ErrorKind::unsupported:
      return argument;
    case lrp::ErrorKind::resource:
      return resource;
    case lrp::ErrorKind::io:
    case lrp::ErrorKind::format:
      return io;
    default:
      return runtime;
  }
}

// JSON config: top-level scalars go to global options, objects named after a
// subcommand go to that subcommand.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }
  static void walk(const json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        walk(value, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array())
        for (const auto& e : value) item.inputs.push_back(scalar(e));
      else
        item.inputs.push_back(scalar(value));
      items.push_back(item);
    }
  }
};

struct Counters {
  std::int64_t environments = 0;
  std::int64_t solves = 0;
  std::int64_t walkers = 0;
};

// Collects written files for the manifest.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  fs::path path(const std::string& name) const { return dir_ / name; }

  void prepare() {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) lrp::fail(lrp::ErrorKind::io, "cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    prepare();
    std::ofstream out(path(name), std::ios::binary);
    out << content;
    out.close();
    if (!out) lrp::fail(lrp::ErrorKind::io, "cannot write " + path(name).string());
    record(name);
  }

  void record(const std::string& name) { files_.emplace_back(name, lrp::file_digest(path(name).string())); }

  json listing() const {
    json a = json::array();
    for (const auto& [name, digest] : files_) a.push_back({{"path", name}, {"crc64", digest}});
    return a;
  }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

// Shortest round-trip form.
std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

// RFC-4180 rows with CRLF line ends.
class Csv {
 public:
  explicit Csv(std::initializer_list<std::string> header) { row_strings(header); }

  template <class... T>
  void row(const T&... fields) {
    std::vector<std::string> v{cell(fields)...};
    row_strings(v);
  }
  const std::string& str() const { return text_; }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(double x) { return number(x); }
  template <class I>
    requires std::is_integral_v<I>
  static std::string cell(I x) {
    return std::to_string(x);
  }
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  template <class Range>
  void row_strings(const Range& fields) {
    bool first = true;
    for (const auto& f : fields) {
      if (!first) text_ += ',';
      text_ += quote(f);
      first = false;
    }
    text_ += "\r\n";
  }
  std::string text_;
};

struct Global {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = ".";
};

struct ModelOpts {
  int d = 1;
  double s = 2.0;
  double q = 1.0;
  std::string norm = "euclidean";
  std::int64_t n = 16;
  bool no_long_range = false;

  void add(CLI::App* app, std::int64_t default_n) {
    n = default_n;
    app->add_option("--d", d, "dimension")->capture_default_str();
    app->add_option("--s", s, "long-range exponent, s > d")->capture_default_str();
    app->add_option("--q", q, "nearest-neighbour probability")->capture_default_str();
    app->add_option("--n", n, "box radius")->capture_default_str();
    app->add_option("--norm", norm, "euclidean or linf")->capture_default_str();
    app->add_flag("--no-long-range", no_long_range, "lattice percolation only");
  }
  lrp::LrpParams params(std::uint64_t seed) const {
    lrp::LrpParams p;
    p.d = d;
    p.s = s;
    p.q = q;
    p.norm = lrp::parse_norm(norm);
    p.n = n;
    p.long_range_enabled = !no_long_range;
    p.seed = seed;
    p.validate();
    return p;
  }
};

json params_json(const lrp::LrpParams& p) {
  return {{"d", p.d},          {"s", p.s}, {"q", p.q}, {"norm", lrp::to_string(p.norm)}, {"n", p.n},
          {"long_range_enabled", p.long_range_enabled}, {"seed", p.seed}};
}

json target_json(int d, double s) {
  double ds = 0;
  if (!lrp::target_spectral_dimension(d, s, ds)) return "open";
  return ds;
}

std::vector<std::int64_t> dyadic_times(std::int64_t t_max) {
  std::vector<std::int64_t> t;
  for (std::int64_t x = 1; x <= t_max; x *= 2) t.push_back(x);
  return t;
}

void check_box(int d, double s, std::int64_t n, std::int64_t t_max, bool force) {
  const auto need = lrp::recommended_box_radius(d, s, t_max);
  if (n >= need || force) return;
  lrp::fail(lrp::ErrorKind::precondition, "box radius " + std::to_string(n) + " is below the regime rule (" +
                                              (need == std::numeric_limits<std::int64_t>::max()
                                                   ? std::string("overflow")
                                                   : std::to_string(need)) +
                                              ") for t_max " + std::to_string(t_max) + "; pass --force to run anyway");
}

json fit_json(const lrp::SpectralFit& f, int d, double s) {
  json j{{"gamma", f.gamma}, {"gamma_stderr", f.gamma_stderr}, {"d_s", f.d_s},
         {"window", {f.t_min, f.t_max}}, {"points", f.points}, {"r2", f.r2}};
  const auto target = target_json(d, s);
  j["d_s_target"] = target;
  j["ratio"] = target.is_number() ? json(f.d_s / target.get<double>()) : json(nullptr);
  return j;
}

// ---- subcommands ----

struct GenerateCmd {
  ModelOpts model;
  std::string out = "environment.lrpg";

  void add(CLI::App* app) {
    model.add(app, 16);
    app->add_option("--out", out, "environment file name inside --out-dir")->capture_default_str();
  }
  json run(const Global& g, Outputs& o, Counters& c) const {
    const auto p = model.params(g.seed);
    lrp::SampleOptions so;
    so.threads = g.threads;
    const auto env = lrp::sample_environment(p, so);
    ++c.environments;
    o.prepare();
    lrp::save_environment(env, o.path(out).string());
    o.record(out);
    std::cout << "d=" << p.d << " s=" << p.s << " q=" << p.q << " norm=" << lrp::to_string(p.norm) << " n=" << p.n
              << " seed=" << p.seed << " vertices=" << env.graph.vertex_count()
              << " edges=" << env.graph.edge_count() << "\n";
    return {{"params", params_json(p)}, {"vertices", env.graph.vertex_count()}, {"edges", env.graph.edge_count()}};
  }
};

struct SpectrumCmd {
  ModelOpts model;
  std::string mode = "quenched";
  std::int64_t t_max = 256, t_min = 4;
  std::int64_t replicates = 10, walks = 0, safety = -1;
  bool force = false;

  void add(CLI::App* app) {
    model.add(app, 1024);
    app->add_option("--mode", mode, "quenched or annealed")
        ->check(CLI::IsMember({"quenched", "annealed"}))
        ->capture_default_str();
    app->add_option("--t-max", t_max, "largest t (fit window end)")->capture_default_str();
    app->add_option("--t-min", t_min, "fit window start")->capture_default_str();
    app->add_option("--replicates", replicates, "environments for the annealed curve")->capture_default_str();
    app->add_option("--walks", walks, "Monte Carlo walkers (quenched; 0 = exact iteration)")->capture_default_str();
    app->add_option("--safety", safety, "absorbing outside this l-inf radius (-1: whole box)")->capture_default_str();
    app->add_flag("--force", force, "run even when the box is smaller than the regime rule");
  }
  json run(const Global& g, Outputs& o, Counters& c) const {
    const auto p = model.params(g.seed);
    lrp::require(t_max >= 1 && t_min >= 1 && t_min <= t_max, "need 1 <= t-min <= t-max");
    check_box(p.d, p.s, p.n, t_max, force);
    lrp::KernelOptions ko;
    ko.safety_radius = safety;
    lrp::SpectralFit fit;
    if (mode == "annealed") {
      lrp::AnnealedOptions ao;
      ao.kernel = ko;
      ao.threads = g.threads;
      const auto curve = lrp::annealed_curve(p, dyadic_times(t_max), replicates, g.seed, ao);
      c.environments += curve.replicates + curve.resamples;
      Csv csv({"d", "s", "q", "t", "mean_p2t", "stderr", "replicates"});
      for (std::size_t i = 0; i < curve.times.size(); ++i)
        csv.row(p.d, p.s, p.q, curve.times[i], curve.mean[i], curve.stderr_[i], curve.replicates);
      o.write("annealed.csv", csv.str());
      fit = lrp::fit_spectral_dimension(curve, t_min, t_max);
    } else {
      lrp::SampleOptions so;
      so.threads = g.threads;
      const auto env = lrp::sample_environment(p, so);
      ++c.environments;
      const auto comp = lrp::largest_component(env);
      if (comp.local(env.box.origin()) < 0)
        lrp::fail(lrp::ErrorKind::precondition, "the origin is not in the largest cluster for this seed");
      lrp::HeatKernelSeries series;
      if (walks > 0) {
        series = lrp::heat_kernel_mc(comp, env.box.origin(), dyadic_times(t_max), walks,
                                     lrp::derive_seed(g.seed, lrp::Stream::walker, 0), ko, g.threads);
        c.walkers += walks;
      } else {
        series = lrp::heat_kernel_exact(comp, env.box.origin(), t_max, ko);
      }
      Csv csv({"t", "p2t", "method", "stderr", "exit_mass"});
      const char* method = walks > 0 ? "monte_carlo" : "exact";
      for (std::size_t i = 0; i < series.times.size(); ++i)
        csv.row(series.times[i], series.values[i], method, series.stderr_[i], series.exit_mass[i]);
      o.write("series.csv", csv.str());
      fit = lrp::fit_spectral_dimension(series, t_min, t_max);
    }
    auto fj = fit_json(fit, p.d, p.s);
    o.write("fit.json", fj.dump(2) + "\n");
    std::cout << mode << " d=" << p.d << " s=" << p.s << ": d_s = " << fit.d_s << " +- " << 2 * fit.gamma_stderr
              << ", target " << fj["d_s_target"].dump() << "\n";
    return {{"params", params_json(p)}, {"fit", fj}};
  }
};

struct CapacityCmd {
  ModelOpts model;
  double t = 64;
  double kappa = 1.0;
  std::string lambda_mode = "log";
  double lambda0 = 8.0;
  double alpha = 1.0;
  std::int64_t scan_max = 0;

  void add(CLI::App* app) {
    model.add(app, 4096);
    app->add_option("--t", t, "time scale")->capture_default_str();
    app->add_option("--kappa", kappa, "box scale multiplier")->capture_default_str();
    app->add_option("--lambda-mode", lambda_mode, "log or constant")
        ->check(CLI::IsMember({"log", "constant"}))
        ->capture_default_str();
    app->add_option("--lambda0", lambda0, "lambda for the constant mode")->capture_default_str();
    app->add_option("--alpha", alpha, "constant in the A3 bounds")->capture_default_str();
    app->add_option("--scan-max", scan_max, "also write expected cutoff energies for N = 4, 8, ... <= this")
        ->capture_default_str();
  }
  json run(const Global& g, Outputs& o, Counters& c) const {
    const auto p = model.params(g.seed);
    auto regime = lrp::RegimeParams::for_model(
        p.d, p.s, kappa, lambda_mode == "log" ? lrp::LambdaMode::log_t : lrp::LambdaMode::constant, lambda0);
    regime.alpha = alpha;
    lrp::SampleOptions so;
    so.threads = g.threads;
    const auto env = lrp::sample_environment(p, so);
    ++c.environments;
    const auto comp = lrp::largest_component(env);
    const auto dec = lrp::build_decomposition(comp, t, regime);

    std::vector<lrp::PotentialSolution> sol(dec.capacitors.size());
    lrp::parallel_for(static_cast<std::int64_t>(sol.size()), g.threads,
                      [&](std::int64_t i) { sol[i] = lrp::solve_capacitor(comp.graph, dec.capacitors[i]); });
    c.solves += static_cast<std::int64_t>(sol.size());
    Csv csv({"id", "A", "Omega", "capacity", "flux", "residual", "iterations"});
    for (std::size_t i = 0; i < sol.size(); ++i)
      csv.row(i, dec.capacitors[i].A.size(), dec.capacitors[i].Omega.size(), sol[i].capacity, sol[i].flux,
              sol[i].residual, sol[i].iterations);
    o.write("capacitors.csv", csv.str());

    const auto a3 = lrp::evaluate_A3(comp, dec, regime);
    c.solves += a3.k;
    json rep{{"t", a3.t},
             {"N", a3.N},
             {"M", a3.M},
             {"k", a3.k},
             {"max_omega", a3.max_omega},
             {"bounds", {{"a", a3.bound_a}, {"b", a3.bound_b}, {"c", a3.bound_c}}},
             {"measured", {{"pi_sum", a3.pi_sum}, {"cap_sum", a3.cap_sum}, {"test_energy_sum", a3.test_energy_sum}}},
             {"ratios", {{"a", a3.ratio_a}, {"b", a3.ratio_b}, {"c", a3.ratio_c}}},
             {"pass", {{"a", a3.pass_a}, {"b", a3.pass_b}, {"c", a3.pass_c}, {"all", a3.pass()}}},
             {"infimum_ok", a3.infimum_ok},
             {"regime", lrp::to_string(regime.regime)},
             {"lambda", dec.lambda}};
    o.write("a3.json", rep.dump(2) + "\n");

    if (scan_max >= 4) {
      Csv e({"N", "M", "beta", "expected_energy", "S1", "S2", "S3", "S4"});
      for (std::int64_t N = 4; N <= scan_max; N *= 2) {
        const double beta = regime.beta(static_cast<double>(N));
        const auto spec = lrp::CutoffSpec::with_beta(p.d, static_cast<double>(N), beta, p.norm);
        const auto b = lrp::energy_breakdown(p, spec);
        e.row(N, spec.M, beta, b.total() / 2, b.S1, b.S2, b.S3, b.S4);
      }
      o.write("energy.csv", e.str());
    }
    std::cout << "k=" << a3.k << " N=" << a3.N << " M=" << a3.M << " cap_sum=" << a3.cap_sum
              << " ratios a/b/c = " << a3.ratio_a << " " << a3.ratio_b << " " << a3.ratio_c
              << (a3.pass() ? " pass" : " fail") << "\n";
    return {{"params", params_json(p)}, {"a3", rep}};
  }
};

struct VerifyCmd {
  std::string suite;

  void add(CLI::App* app) {
    app->add_option("suite", suite, "kpr, nash-williams, cutoff-energy, covariance, conditions, potential or all")
        ->required();
  }
  json run(const Global& g, Outputs& o, Counters&, bool& failed) const {
    std::vector<std::string> names;
    if (suite == "all")
      names = lrp::verify_suite_names();
    else
      names.push_back(suite);
    json all = json::array();
    for (const auto& name : names) {
      const auto r = lrp::run_verify_suite(name, {g.seed, g.threads});
      json checks = json::array();
      for (const auto& ch : r.checks) {
        checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
        std::cout << (ch.pass ? "PASS " : "FAIL ") << name << ": " << ch.name << " -- " << ch.detail << "\n";
      }
      json j{{"suite", name}, {"pass", r.pass()}, {"checks", checks}};
      o.write("verify_" + name + ".json", j.dump(2) + "\n");
      all.push_back({{"suite", name}, {"pass", r.pass()}});
      failed = failed || !r.pass();
    }
    return {{"suites", all}};
  }
};

struct GridCmd {
  std::vector<int> dims{1, 2};
  std::vector<double> s1{1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4, 2.6, 2.8, 3.0};
  std::vector<double> s2{2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  double q = 1.0;
  std::int64_t t_max = 64, t_min = 4, replicates = 4;
  std::int64_t max_n1 = std::int64_t{1} << 15, max_n2 = 512;
  bool force = false;

  void add(CLI::App* app) {
    app->add_option("--dims", dims, "dimensions to sweep")->capture_default_str();
    app->add_option("--s1", s1, "exponents for d=1")->capture_default_str();
    app->add_option("--s2", s2, "exponents for d=2")->capture_default_str();
    app->add_option("--q", q, "nearest-neighbour probability")->capture_default_str();
    app->add_option("--t-max", t_max, "largest t")->capture_default_str();
    app->add_option("--t-min", t_min, "fit window start")->capture_default_str();
    app->add_option("--replicates", replicates, "environments per cell")->capture_default_str();
    app->add_option("--max-n1", max_n1, "largest box radius for d=1")->capture_default_str();
    app->add_option("--max-n2", max_n2, "largest box radius for d=2")->capture_default_str();
    app->add_flag("--force", force, "cap the box at the maximum instead of skipping the cell");
  }
  json run(const Global& g, Outputs& o, Counters& c) const {
    Csv csv({"d", "s", "d_s_target", "d_s_measured", "stderr", "n", "status"});
    int cell = 0, failures = 0;
    for (int d : dims) {
      lrp::require(d == 1 || d == 2, "grid dimensions must be 1 or 2");
      for (double s : d == 1 ? s1 : s2) {
        const auto target = target_json(d, s);
        const std::string tgt = target.is_number() ? number(target.get<double>()) : "open";
        const std::int64_t cap = d == 1 ? max_n1 : max_n2;
        const auto need = lrp::recommended_box_radius(d, s, t_max);
        const std::int64_t n = std::min(need, cap);
        std::string status = need > cap ? "box capped at " + std::to_string(cap) : "ok";
        double measured = std::nan(""), se = std::nan("");
        try {
          if (need > cap && !force)
            lrp::fail(lrp::ErrorKind::precondition, "regime rule needs n = " +
                                                        (need == std::numeric_limits<std::int64_t>::max()
                                                             ? std::string("overflow")
                                                             : std::to_string(need)));
          lrp::LrpParams p;
          p.d = d;
          p.s = s;
          p.q = q;
          p.n = n;
          p.validate();
          lrp::AnnealedOptions ao;
          ao.threads = g.threads;
          const auto curve = lrp::annealed_curve(p, dyadic_times(t_max), replicates,
                                                 lrp::derive_seed(g.seed, lrp::Stream::instance, cell), ao);
          c.environments += curve.replicates + curve.resamples;
          const auto fit = lrp::fit_spectral_dimension(curve, t_min, t_max);
          measured = fit.d_s;
          se = 2 * fit.gamma_stderr;
        } catch (const lrp::Error& e) {
          status = std::string("error: ") + e.what();
          ++failures;
        }
        csv.row(d, s, tgt, measured, se, n, status);
        std::cout << "d=" << d << " s=" << s << " target " << tgt << " measured " << measured << " (" << status
                  << ")\n";
        ++cell;
      }
    }
    o.write("grid.csv", csv.str());
    return {{"cells", cell}, {"failed_cells", failures}};
  }
};

struct BsDiagCmd {
  ModelOpts model;
  std::vector<std::int64_t> n_list{64, 128, 256, 512};
  std::vector<double> c_list{0.01, 0.05, 0.1, 0.25};
  std::int64_t reps = 100;

  void add(CLI::App* app) {
    model.add(app, 0);
    app->add_option("--n-list", n_list, "box radii")->capture_default_str();
    app->add_option("--c-list", c_list, "volume fractions for condition V")->capture_default_str();
    app->add_option("--reps", reps, "environments per box radius")->capture_default_str();
  }
  json run(const Global& g, Outputs& o, Counters& c) const {
    auto m = model;
    m.n = n_list.empty() ? 1 : n_list.front();
    const auto p = m.params(g.seed);
    const auto bs = lrp::bs_diagnostics(p, n_list, reps, g.threads);
    Csv b({"n", "margin", "reps", "var_wn_over_n2d", "var_ci_lo", "var_ci_hi", "a_proxy", "a_ci_lo", "a_ci_hi"});
    for (const auto& r : bs)
      b.row(r.n, r.margin, r.reps, r.var_wn_over_n2d, r.var_ci.lo, r.var_ci.hi, r.a_proxy, r.a_ci.lo, r.a_ci.hi);
    o.write("bs_diag.csv", b.str());
    const auto v = lrp::check_condition_V(p, c_list, n_list, reps, g.threads);
    Csv cv({"n", "c", "reps", "p_hat", "ci_lo", "ci_hi"});
    for (const auto& r : v) cv.row(r.n, r.c, r.reps, r.p_hat, r.ci.lo, r.ci.hi);
    o.write("condition_v.csv", cv.str());
    c.environments += 2 * reps * static_cast<std::int64_t>(n_list.size());
    for (const auto& r : bs)
      std::cout << "n=" << r.n << " var/n^2d=" << r.var_wn_over_n2d << " a_proxy=" << r.a_proxy << "\n";
    return {{"params", params_json(p)}};
  }
};

struct CutpointsCmd {
  ModelOpts model;
  std::string out = "cutpoints.txt";

  void add(CLI::App* app) {
    model.add(app, 4096);
    app->add_option("--out", out, "output file name")->capture_default_str();
  }
  json run(const Global& g, Outputs& o, Counters& c) const {
    const auto p = model.params(g.seed);
    lrp::SampleOptions so;
    so.threads = g.threads;
    const auto env = lrp::sample_environment(p, so);
    ++c.environments;
    const auto cuts = lrp::find_cut_points(env);
    std::string text;
    for (auto x : cuts) text += std::to_string(x) + "\n";
    o.write(out, text);
    std::cout << cuts.size() << " cut-points in [" << -p.n << ", " << p.n << "]\n";
    return {{"params", params_json(p)}, {"cut_points", cuts.size()}};
  }
};

json config_echo(const CLI::App* app) {
  json j = json::object();
  for (const auto* opt : app->get_options()) {
    const auto name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      j[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else {
      const auto def = opt->get_default_str();
      j[name] = def.empty() && opt->get_expected_min() == 0 ? "false" : def;
    }
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-range percolation experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.option_defaults()->always_capture_default();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.allow_config_extras(CLI::config_extras_mode::error);

  Global g;
  app.set_config("--config", "", "JSON file mirroring the flags; flags win");
  app.add_option("--seed", g.seed, "base seed")->capture_default_str();
  auto* threads_opt = app.add_option("--threads", g.threads, "worker threads (default: LRP_THREADS, then all cores)");
  app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();

  GenerateCmd gen;
  SpectrumCmd spec;
  CapacityCmd cap;
  VerifyCmd ver;
  GridCmd grid;
  BsDiagCmd bs;
  CutpointsCmd cuts;
  std::map<std::string, CLI::App*> subs;
  subs["generate"] = app.add_subcommand("generate", "sample an environment and write it to a file");
  subs["spectrum"] = app.add_subcommand("spectrum", "return probabilities and the spectral dimension fit");
  subs["capacity"] = app.add_subcommand("capacity", "capacitor decomposition, capacities and the A3 report");
  subs["verify"] = app.add_subcommand("verify", "run a property suite");
  subs["grid"] = app.add_subcommand("grid", "spectral dimension over a grid of (d, s)");
  subs["bs-diag"] = app.add_subcommand("bs-diag", "window and volume diagnostics");
  subs["cutpoints"] = app.add_subcommand("cutpoints", "cut-points of a one-dimensional environment");
  gen.add(subs["generate"]);
  spec.add(subs["spectrum"]);
  cap.add(subs["capacity"]);
  ver.add(subs["verify"]);
  grid.add(subs["grid"]);
  bs.add(subs["bs-diag"]);
  cuts.add(subs["cutpoints"]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : argument;
  }

  if (threads_opt->count() == 0) {
    const char* env = std::getenv("LRP_THREADS");
    g.threads = 0;
    if (env != nullptr) {
      try {
        g.threads = std::stoi(env);
      } catch (const std::exception&) {
        std::cerr << "error: LRP_THREADS is not an integer\n";
        return argument;
      }
    }
  }
  if (g.threads <= 0) g.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::string command;
  CLI::App* sub = nullptr;
  for (const auto& [name, a] : subs)
    if (a->parsed()) {
      command = name;
      sub = a;
    }

  Outputs outputs(g.out_dir);
  Counters counters;
  bool verify_failed = false;
  const auto start = std::chrono::steady_clock::now();
  json result;
  try {
    if (command == "generate") result = gen.run(g, outputs, counters);
    if (command == "spectrum") result = spec.run(g, outputs, counters);
    if (command == "capacity") result = cap.run(g, outputs, counters);
    if (command == "verify") result = ver.run(g, outputs, counters, verify_failed);
    if (command == "grid") result = grid.run(g, outputs, counters);
    if (command == "bs-diag") result = bs.run(g, outputs, counters);
    if (command == "cutpoints") result = cuts.run(g, outputs, counters);

    json manifest{{"command", command},
                  {"config", {{"global", config_echo(&app)}, {command, config_echo(sub)}}},
                  {"library_version", lrp::kVersion},
                  {"seed", g.seed},
                  {"threads", g.threads},
                  {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
                  {"counters",
                   {{"environments", counters.environments},
                    {"solves", counters.solves},
                    {"walkers", counters.walkers}}},
                  {"result", result},
                  {"outputs", outputs.listing()}};
    outputs.prepare();
    std::ofstream mf(outputs.path("manifest.json"), std::ios::binary);
    mf << manifest.dump(2) << "\n";
    mf.close();
    if (!mf) lrp::fail(lrp::ErrorKind::io, "cannot write manifest.json");
  } catch (const lrp::Error& e) {
    std::cerr << "error (" << lrp::to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "error (resource): out of memory\n";
    return resource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return runtime;
  }
  return verify_failed ? Exit::verify_failed : ok;
}
