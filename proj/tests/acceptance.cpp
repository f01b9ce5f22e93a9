// Acceptance run: one line per criterion. With arguments, runs only the listed numbers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lrp/lrp.hpp"

using namespace lrp;

namespace {

constexpr std::uint64_t kBaseSeed = 1;

std::uint64_t seed_for(int criterion, std::uint64_t env = 0) {
  return derive_seed(kBaseSeed, Stream::instance, static_cast<std::uint64_t>(criterion), env);
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

LrpParams model(int d, double s, double q, std::int64_t n, std::uint64_t seed = 0) {
  LrpParams p;
  p.d = d;
  p.s = s;
  p.q = q;
  p.n = n;
  p.seed = seed;
  return p;
}

std::vector<std::int64_t> dyadic(std::int64_t hi) {
  std::vector<std::int64_t> t;
  for (std::int64_t x = 1; x <= hi; x *= 2) t.push_back(x);
  return t;
}

std::int64_t closed_walks_2d(int len, int x = 0, int y = 0) {
  if (std::abs(x) + std::abs(y) > len) return 0;
  if (len == 0) return x == 0 && y == 0;
  return closed_walks_2d(len - 1, x + 1, y) + closed_walks_2d(len - 1, x - 1, y) +
         closed_walks_2d(len - 1, x, y + 1) + closed_walks_2d(len - 1, x, y - 1);
}

double binom_central(int t) {
  // C(2t, t) 4^{-t} as a running product
  double v = 1;
  for (int k = 1; k <= t; ++k) v *= (2.0 * k - 1) / (2.0 * k);
  return v;
}

std::string fit_detail(const SpectralFit& f) {
  return fmt("d_s = %.4f (stderr %.4f, r2 %.4f, %zu points in [%lld, %lld])", f.d_s, 2 * f.gamma_stderr, f.r2,
             f.points, static_cast<long long>(f.t_min), static_cast<long long>(f.t_max));
}

Outcome in_range(const SpectralFit& f, double lo, double hi) {
  return {f.d_s >= lo && f.d_s <= hi, fit_detail(f) + fmt(", accepted [%.2f, %.2f]", lo, hi)};
}

Outcome c1() {
  double err1 = 0;
  {
    const auto comp = largest_component(lattice_environment(1, 64));
    const auto series = heat_kernel_exact(comp, comp.box.origin(), 20);
    for (int t = 1; t <= 20; ++t) err1 = std::max(err1, std::abs(2 * series.values[t - 1] - binom_central(t)));
  }
  double err2 = 0;
  {
    const auto comp = largest_component(lattice_environment(2, 16));
    const auto series = heat_kernel_exact(comp, comp.box.origin(), 6);
    for (int t = 1; t <= 6; ++t) {
      const double p = static_cast<double>(closed_walks_2d(2 * t)) / std::pow(4.0, 2 * t) / 4.0;
      err2 = std::max(err2, std::abs(series.values[t - 1] - p));
    }
  }
  return {err1 <= 1e-12 && err2 <= 1e-12,
          fmt("d=1 max error %.2e over t<=20; d=2 max error %.2e against enumeration over t<=6", err1, err2)};
}

Outcome c2() {
  const auto env = sample_environment(model(1, 3, 1, 20000, seed_for(2)));
  const auto comp = largest_component(env);
  KernelOptions ko;
  ko.safety_radius = 10000;
  const auto series = heat_kernel_exact(comp, env.box.origin(), 4096, ko);
  return in_range(fit_spectral_dimension(series, 64, 4096), 0.90, 1.10);
}

Outcome c3() {
  const auto curve = annealed_curve(model(1, 1.7, 1, 100000), dyadic(512), 20, seed_for(3));
  return in_range(fit_spectral_dimension(curve, 16, 512), 2.4, 3.4);
}

Outcome c4() {
  const auto curve = annealed_curve(model(2, 3, 1, 512), dyadic(256), 10, seed_for(4));
  return in_range(fit_spectral_dimension(curve, 4, 128), 3.3, 4.7);
}

Outcome c5() {
  const auto env = sample_environment(model(2, 5, 1, 512, seed_for(5)));
  const auto comp = largest_component(env);
  KernelOptions ko;
  ko.safety_radius = 256;
  const auto series = heat_kernel_exact(comp, env.box.origin(), 1024, ko);
  return in_range(fit_spectral_dimension(series, 64, 1024), 1.8, 2.2);
}

Outcome c6() {
  AnnealedOptions a1;
  a1.kernel.safety_radius = 2048;
  const auto one = fit_spectral_dimension(annealed_curve(model(1, 3, 1, 4096), dyadic(4096), 50, seed_for(6, 0), a1),
                                          64, 4096);
  const auto two = fit_spectral_dimension(annealed_curve(model(2, 3, 1, 256), dyadic(64), 20, seed_for(6, 1)), 4, 64);
  const bool ok1 = one.d_s >= 0.9 && one.d_s <= 1.1;
  const bool ok2 = two.d_s >= 3.3 && two.d_s <= 4.7;
  return {ok1 && ok2, "d=1 s=3: " + fit_detail(one) + (ok1 ? " in" : " outside") + " [0.9, 1.1]; d=2 s=3: " +
                          fit_detail(two) + (ok2 ? " in" : " outside") + " [3.3, 4.7]"};
}

Outcome suite(const char* name) {
  const auto r = run_verify_suite(name, {kBaseSeed, 1});
  std::string detail;
  for (const auto& c : r.checks) {
    if (!detail.empty()) detail += " | ";
    detail += (c.pass ? "" : "FAILED ") + c.name + ": " + c.detail;
  }
  return {r.pass(), detail};
}

Outcome c13() {
  const std::int64_t box = std::int64_t{1} << 15;
  const auto env = sample_environment(model(1, 2.5, 1, box, seed_for(13)));
  const auto cuts = find_cut_points(env);
  const auto origin = static_cast<Vertex>(env.box.origin());
  SolverOptions so;
  so.solver = LinearSolver::direct;

  std::vector<double> x, count, per_site;
  bool above_cuts = true;
  std::string rows;
  for (int k = 10; k <= 14; ++k) {
    const std::int64_t n = std::int64_t{1} << k;
    std::int64_t in_closed = 0, in_half_open = 0;
    for (auto c : cuts) {
      in_closed += c >= 0 && c <= n;
      in_half_open += c >= 0 && c < n;
    }
    const std::vector<Vertex> A{origin}, B{static_cast<Vertex>(origin + n)};
    const double R = effective_resistance(env.graph, A, B, so).value;
    x.push_back(static_cast<double>(n));
    count.push_back(static_cast<double>(in_closed));
    per_site.push_back(R / static_cast<double>(n));
    // each cut-point in [0, n) is a unit resistor in series
    above_cuts = above_cuts && R >= static_cast<double>(in_half_open) * (1 - 1e-9);
    rows += fmt(" n=%lld:%lld,%.4f", static_cast<long long>(n), static_cast<long long>(in_closed), R / n);
  }
  const auto fit = fit_line(x, count);
  const double lo = *std::min_element(per_site.begin(), per_site.end());
  const double hi = *std::max_element(per_site.begin(), per_site.end());
  const double spread = (hi - lo) / mean_stat(per_site).mean;
  const bool linear = fit.slope > 0 && fit.r2 >= 0.9;
  return {linear && spread <= 0.15 && above_cuts,
          fmt("cut-point slope %.4f r2 %.4f%s; R(0,n)/n spread %.1f%% (limit 15%%)%s; R >= cut count %s; "
              "cuts,R/n by n:",
              fit.slope, fit.r2, linear ? "" : " (FAILED)", 100 * spread, spread <= 0.15 ? "" : " (FAILED)",
              above_cuts ? "yes" : "NO") +
              rows};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "lattice oracle", c1},
      {2, "gaussian d=1 s=3 quenched", c2},
      {3, "stable d=1 s=1.7", c3},
      {4, "stable d=2 s=3", c4},
      {5, "gaussian d=2 s=5", c5},
      {6, "annealed curves", c6},
      {7, "capacitor inequality", [] { return suite("kpr"); }},
      {8, "cutoff energy scaling", [] { return suite("cutoff-energy"); }},
      {9, "potential suite", [] { return suite("potential"); }},
      {10, "nash-williams", [] { return suite("nash-williams"); }},
      {11, "energy covariance", [] { return suite("covariance"); }},
      {12, "conditions sweep", [] { return suite("conditions"); }},
      {13, "one-dimensional structure", c13},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("C%-2d %s  %s [%.1fs]: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
