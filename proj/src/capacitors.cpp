#include "lrp/capacitors.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "lrp/cutoff.hpp"
#include "lrp/error.hpp"
#include "lrp/heat_kernel.hpp"
#include "lrp/parallel.hpp"
#include "lrp/rng.hpp"

namespace lrp {

double pi_star(const Graph& g, double eps) {
  require(eps >= 0, "pi_star: eps must be non-negative");
  if (g.edge_count() == 0) fail(ErrorKind::precondition, "pi_star: graph has no edges");
  const auto k = static_cast<std::int64_t>(std::floor(eps * g.vertex_count() + 1e-12));
  std::vector<int> deg(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) deg[v] = g.degree(v);
  const auto take = std::min<std::int64_t>(k, deg.size());
  std::partial_sort(deg.begin(), deg.begin() + take, deg.end(), std::greater<>());
  double sum = 0;
  for (std::int64_t i = 0; i < take; ++i) sum += deg[i];
  return sum / (2.0 * static_cast<double>(g.edge_count()));
}

Regime regime_of(int d, double s) {
  require(s > d, "regime_of: need s > d");
  if (std::abs(s - (d + 2.0)) < 1e-12) return Regime::critical;
  if (s < d + 2.0) return Regime::stable;
  return Regime::gaussian;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::stable: return "stable";
    case Regime::gaussian: return "gaussian";
    case Regime::critical: return "critical";
  }
  return "?";
}

RegimeParams RegimeParams::for_model(int d, double s, double kappa, LambdaMode mode, double lambda0) {
  RegimeParams r;
  r.regime = regime_of(d, s);
  r.d = d;
  r.s = s;
  r.kappa = kappa;
  r.mode = mode;
  r.lambda0 = lambda0;
  require(kappa > 0, "kappa must be positive");
  require(lambda0 > 1, "lambda0 must exceed 1");
  if (r.regime == Regime::critical && mode == LambdaMode::constant)
    fail(ErrorKind::unsupported, "the critical regime has no constant-lambda variant");
  return r;
}

double RegimeParams::lambda(double t) const {
  return mode == LambdaMode::constant ? lambda0 : std::max(1.0, std::log(t));
}

double RegimeParams::box_scale(double t) const {
  require(t > 1, "t must exceed 1");
  const double a = s - d;
  const double lt = std::log(t);
  switch (regime) {
    case Regime::stable:
      return mode == LambdaMode::constant ? std::pow(t, 1.0 / a) * std::pow(lambda0, 2.0 / a)
                                          : std::pow(t, 1.0 / a) * std::pow(lt, 2.0 * kappa / a);
    case Regime::gaussian:
      return mode == LambdaMode::constant ? std::sqrt(t) * lambda0 : std::sqrt(t) * std::pow(lt, kappa);
    case Regime::critical:
      return std::sqrt(t) * std::pow(lt, kappa + 0.5);
  }
  return 0;
}

double RegimeParams::beta(double N) const {
  const double b = mode == LambdaMode::constant ? lambda0 : std::pow(std::log(std::max(N, 1.0)), kappa);
  return std::max(2.0, b);
}

double RegimeParams::gamma() const { return regime == Regime::stable ? d / (s - d) : d / 2.0; }

double RegimeParams::delta1() const {
  const double k = mode == LambdaMode::constant ? 1.0 : kappa;
  switch (regime) {
    case Regime::stable: return 2.0 * d * k / (s - d);
    case Regime::gaussian: return d * k;
    case Regime::critical: return d * (kappa + 0.5);
  }
  return 0;
}

double RegimeParams::delta2() const { return mode == LambdaMode::constant ? 1.0 : kappa; }
double RegimeParams::delta3() const { return delta2(); }

CapacitorDecomposition build_decomposition(const BoxComponent& comp, double t, const RegimeParams& regime) {
  require(regime.d == comp.params.d, "regime dimension differs from the environment");
  CapacitorDecomposition dec;
  dec.t = t;
  dec.lambda = regime.lambda(t);
  dec.N_real = regime.box_scale(t);
  const std::int64_t n = comp.params.n;
  if (!(dec.N_real < static_cast<double>(n) / 2.0) || dec.N_real < 1.0)
    fail(ErrorKind::precondition, "box too small: N = " + std::to_string(dec.N_real) + " needs n > " +
                                      std::to_string(2.0 * std::floor(dec.N_real)));
  dec.N = static_cast<std::int64_t>(std::floor(dec.N_real));
  dec.beta = regime.beta(static_cast<double>(dec.N));
  dec.M = static_cast<double>(dec.N) / dec.beta;
  dec.inner_radius = static_cast<std::int64_t>(std::floor(static_cast<double>(dec.N) - dec.M));
  const std::int64_t N = dec.N;
  const int d = comp.params.d;
  std::vector<std::int64_t> axis;
  for (std::int64_t c = -n + 2 * N; c + N <= n - N; c += 2 * N + 1) axis.push_back(c);
  const auto per_axis = static_cast<std::int64_t>(axis.size());
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis;
  for (std::int64_t k = 0; k < total; ++k) {
    Point c{};
    std::int64_t rem = k;
    for (int i = 0; i < d; ++i) {
      c[i] = axis[rem % per_axis];
      rem /= per_axis;
    }
    Capacitor cap;
    for_each_in_cube(d, N, [&](const Point& off) {
      Point x{};
      for (int i = 0; i < d; ++i) x[i] = c[i] + off[i];
      const Vertex v = comp.local(comp.box.index(x));
      if (v < 0) return;
      cap.Omega.push_back(v);
      if (linf_of(off, d) <= dec.inner_radius) cap.A.push_back(v);
    });
    if (cap.Omega.empty()) {
      ++dec.dropped_empty;
      continue;
    }
    std::sort(cap.Omega.begin(), cap.Omega.end());
    std::sort(cap.A.begin(), cap.A.end());
    dec.centers.push_back(c);
    dec.capacitors.push_back(std::move(cap));
  }
  return dec;
}

A3Report evaluate_A3(const BoxComponent& comp, const CapacitorDecomposition& dec, const RegimeParams& regime,
                     const SolverOptions& options) {
  const Graph& g = comp.graph;
  const double two_e = 2.0 * static_cast<double>(g.edge_count());
  require(two_e > 0, "evaluate_A3: component has no edges");
  A3Report r;
  r.t = dec.t;
  r.N = static_cast<double>(dec.N);
  r.M = dec.M;
  r.k = static_cast<std::int64_t>(dec.capacitors.size());
  const double lam = dec.lambda;
  r.bound_a = regime.alpha * std::pow(dec.t, regime.gamma()) * std::pow(lam, regime.delta1());
  r.bound_b = 1.0 - regime.alpha * std::pow(lam, -regime.delta2());
  r.bound_c = regime.alpha * two_e / dec.t * std::pow(lam, -regime.delta3());
  CutoffSpec phi{comp.params.d, static_cast<double>(dec.N), dec.M, Norm::linf, Point{}};
  for (std::size_t i = 0; i < dec.capacitors.size(); ++i) {
    const auto& cap = dec.capacitors[i];
    r.max_omega = std::max<std::int64_t>(r.max_omega, static_cast<std::int64_t>(cap.Omega.size()));
    for (Vertex a : cap.A) r.pi_sum += g.degree(a) / two_e;
    if (!cap.A.empty()) r.cap_sum += solve_capacitor(g, cap, options).capacity;
    phi.center = dec.centers[i];
    double energy = 0;
    for (Vertex v : cap.Omega) {
      const double fv = phi(comp.position(v));
      for (Vertex w : g.neighbors(v)) {
        const bool w_in = std::binary_search(cap.Omega.begin(), cap.Omega.end(), w);
        if (w_in && w < v) continue;
        const double fw = w_in ? phi(comp.position(w)) : 0.0;
        energy += (fv - fw) * (fv - fw);
      }
    }
    r.test_energy_sum += 2.0 * energy;
  }
  r.ratio_a = r.max_omega / r.bound_a;
  r.ratio_b = r.bound_b != 0 ? r.pi_sum / r.bound_b : 0.0;
  r.ratio_c = r.cap_sum / r.bound_c;
  r.pass_a = r.max_omega <= r.bound_a;
  r.pass_b = r.pi_sum >= r.bound_b;
  r.pass_c = r.cap_sum <= r.bound_c;
  r.infimum_ok = r.cap_sum <= r.test_energy_sum * (1.0 + 1e-9) + 1e-12;
  return r;
}

std::vector<double> diagonal_return_probabilities(const Graph& g, std::int64_t t) {
  const Vertex n = g.vertex_count();
  std::vector<double> out(n);
  if (n <= 4000) {
    const Eigen::VectorXd deg = g.degrees<double>();
    const Eigen::VectorXd isd = deg.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd S = isd.asDiagonal() * Eigen::MatrixXd(g.adjacency<double>()) * isd.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
    const Eigen::ArrayXd pw = eig.eigenvalues().array().abs().pow(static_cast<double>(2 * t));
    const Eigen::MatrixXd& U = eig.eigenvectors();
    for (Vertex x = 0; x < n; ++x) out[x] = (U.row(x).array().square() * pw.transpose()).sum() / deg[x];
    return out;
  }
  for (Vertex x = 0; x < n; ++x) out[x] = walk_distribution(g, x, 2 * t)[x] / g.degree(x);
  return out;
}

KprResult check_kpr_inequality(const Graph& g, const std::vector<Capacitor>& caps, std::int64_t t, double eps,
                               const SolverOptions& options) {
  require(t >= 1 && eps > 0, "check_kpr_inequality: need t >= 1 and eps > 0");
  const Vertex n = g.vertex_count();
  const auto labels = label_components(g);
  if (labels.size.size() != 1) fail(ErrorKind::disconnected, "check_kpr_inequality: graph is disconnected");
  std::vector<char> used(n, 0);
  KprResult r;
  for (const auto& cap : caps) {
    for (Vertex v : cap.Omega) {
      if (used[v]) fail(ErrorKind::precondition, "check_kpr_inequality: the Omega_i overlap");
      used[v] = 1;
    }
    r.M = std::max<std::int64_t>(r.M, static_cast<std::int64_t>(cap.Omega.size()));
  }
  require(r.M > 0, "check_kpr_inequality: no capacitors");
  const double E = static_cast<double>(g.edge_count());
  r.threshold = eps * n / (8.0 * r.M * E);
  const auto p = diagonal_return_probabilities(g, t);
  for (Vertex x = 0; x < n; ++x)
    if (p[x] >= r.threshold * (1.0 - 1e-10)) r.lhs += g.degree(x) / (2.0 * E);
  r.pi_star = pi_star(g, eps);
  for (const auto& cap : caps) {
    for (Vertex a : cap.A) r.pi_A_sum += g.degree(a) / (2.0 * E);
    if (!cap.A.empty()) r.cap_sum += solve_capacitor(g, cap, options).capacity;
  }
  r.rhs = -2.0 * r.pi_star + r.pi_A_sum - static_cast<double>(t) / E * r.cap_sum;
  r.holds = r.lhs >= r.rhs - 1e-9;
  return r;
}

bool plateau(const std::vector<double>& values) {
  if (values.empty()) return false;
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  const double upper = *std::max_element(values.begin() + static_cast<std::ptrdiff_t>(m / 2), values.end());
  return upper <= 1.5 * median;
}

A1A2Report check_A1_A2(const LrpParams& params, const std::vector<std::int64_t>& n_list, std::int64_t reps,
                       const std::vector<double>& eps_list, int threads) {
  require_pre(reps >= 30, "check_A1_A2: need at least 30 replicates");
  require(!n_list.empty() && !eps_list.empty(), "check_A1_A2: empty grid");
  A1A2Report rep;
  for (std::int64_t n : n_list) {
    std::vector<double> ratio(reps);
    std::vector<std::vector<double>> ps(eps_list.size(), std::vector<double>(reps));
    parallel_for(reps, threads, [&](std::int64_t r) {
      LrpParams p = params;
      p.n = n;
      p.seed = derive_seed(params.seed, Stream::replicate, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r));
      const auto comp = largest_component(sample_environment(p));
      const double x = static_cast<double>(comp.edge_count()) / static_cast<double>(comp.vertex_count());
      ratio[r] = x * x;
      for (std::size_t e = 0; e < eps_list.size(); ++e) {
        const double v = pi_star(comp.graph, eps_list[e]);
        ps[e][r] = v * v / eps_list[e];
      }
    });
    A1A2Row row;
    row.n = n;
    row.reps = reps;
    const auto m = mean_stat(ratio);
    row.edge_ratio_sq = m.mean;
    row.edge_ratio_sq_se = m.stderr_;
    row.eps = eps_list;
    for (auto& col : ps) row.pistar_sq_over_eps.push_back(mean_stat(col).mean);
    rep.rows.push_back(row);
  }
  std::vector<double> er;
  for (const auto& row : rep.rows) er.push_back(row.edge_ratio_sq);
  rep.edge_ratio_plateau = plateau(er);
  rep.pistar_plateau = true;
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    std::vector<double> col;
    for (const auto& row : rep.rows) col.push_back(row.pistar_sq_over_eps[e]);
    rep.pistar_plateau = rep.pistar_plateau && plateau(col);
  }
  const auto widest = static_cast<std::size_t>(std::max_element(eps_list.begin(), eps_list.end()) - eps_list.begin());
  rep.pistar_bounded = true;
  for (const auto& row : rep.rows)
    for (double v : row.pistar_sq_over_eps)
      rep.pistar_bounded = rep.pistar_bounded && v <= 1.5 * row.pistar_sq_over_eps[widest];
  return rep;
}

}  // namespace lrp
