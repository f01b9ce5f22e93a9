#include "lrp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include "lrp/capacitors.hpp"
#include "lrp/cutoff.hpp"
#include "lrp/error.hpp"
#include "lrp/parallel.hpp"
#include "lrp/rng.hpp"

namespace lrp {

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Random spanning tree plus about `extra` further edges per vertex.
Graph random_connected_graph(StreamRng& rng, int n, double extra) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({static_cast<Vertex>(rng() % static_cast<std::uint64_t>(v)), v});
  const double p = std::min(1.0, extra / n);
  std::vector<std::vector<Vertex>> nb(n);
  for (const auto& [u, v] : edges) nb[u].push_back(v);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform() < p && std::find(nb[u].begin(), nb[u].end(), v) == nb[u].end() &&
          std::find(nb[v].begin(), nb[v].end(), u) == nb[v].end())
        edges.push_back({u, v});
  return Graph::from_edges(n, edges);
}

// Small LRP cluster or random graph with at most max_n vertices.
Graph random_instance_graph(StreamRng& rng, std::uint64_t seed, int max_n) {
  const auto kind = rng() % 3;
  if (kind == 2) return random_connected_graph(rng, 10 + static_cast<int>(rng() % (max_n - 9)), 1.0 + 2 * rng.uniform());
  LrpParams p;
  p.d = kind == 0 ? 1 : 2;
  p.s = p.d + 0.2 + 2.0 * rng.uniform();
  p.q = 0.5 + 0.5 * rng.uniform();
  p.n = p.d == 1 ? 10 + static_cast<std::int64_t>(rng() % ((max_n - 1) / 2 - 9))
                 : 3 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>((std::sqrt(max_n) - 1) / 2 - 2));
  p.seed = seed;
  return largest_component(sample_environment(p)).graph;
}

// Disjoint graph balls; A_i is the ball of radius r_i - j_i around the same centre.
std::vector<Capacitor> random_ball_capacitors(StreamRng& rng, const Graph& g) {
  const Vertex n = g.vertex_count();
  std::vector<char> used(n, 0);
  std::vector<Capacitor> caps;
  const int k = 1 + static_cast<int>(rng() % 12);
  for (int i = 0; i < k; ++i) {
    const auto centre = static_cast<Vertex>(rng() % static_cast<std::uint64_t>(n));
    if (used[centre]) continue;
    const int r = 1 + static_cast<int>(rng() % 6);
    const int inner = r - 1 - static_cast<int>(rng() % 2);
    const auto dist = bfs_distances(g, centre);
    Capacitor c;
    for (Vertex v = 0; v < n; ++v) {
      if (used[v] || dist[v] < 0 || dist[v] > r) continue;
      c.Omega.push_back(v);
      if (dist[v] <= inner) c.A.push_back(v);
    }
    if (c.A.empty()) c.A.push_back(centre);
    for (Vertex v : c.Omega) used[v] = 1;
    caps.push_back(std::move(c));
  }
  return caps;
}

// Random A inside random Omega.
Capacitor random_capacitor(StreamRng& rng, Vertex n) {
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  std::shuffle(all.begin(), all.end(), rng);
  const auto omega = 1 + static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n));
  const auto a = 1 + static_cast<std::size_t>(rng() % omega);
  Capacitor c;
  c.Omega.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(omega));
  c.A.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(a));
  std::sort(c.Omega.begin(), c.Omega.end());
  std::sort(c.A.begin(), c.A.end());
  return c;
}

std::vector<Check> suite_kpr(const VerifyOptions& o) {
  const std::vector<double> eps_grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
  const int instances = 200;
  std::vector<KprResult> res(instances);
  std::vector<std::string> errors(instances);
  parallel_for(instances, o.threads, [&](std::int64_t i) {
    StreamRng rng(o.seed, Stream::instance, 7000 + static_cast<std::uint64_t>(i));
    const auto g = random_instance_graph(rng, derive_seed(o.seed, Stream::instance, 7000, i), 300);
    const auto caps = random_ball_capacitors(rng, g);
    const auto t = 1 + static_cast<std::int64_t>(rng() % 50);
    res[i] = check_kpr_inequality(g, caps, t, eps_grid[i % eps_grid.size()]);
  });
  int holds = 0, live = 0;
  double worst = 1e300;
  for (const auto& r : res) {
    holds += r.holds;
    live += r.rhs > 0;
    worst = std::min(worst, r.lhs - r.rhs);
  }
  return {{"kpr inequality", holds == instances,
           fmt("%d/%d hold, %d with positive right side, min lhs-rhs %.3g", holds, instances, live, worst)}};
}

std::vector<Check> suite_nash_williams(const VerifyOptions&) {
  std::vector<Check> out;
  for (int d = 1; d <= 2; ++d) {
    int total = 0, ok = 0;
    double worst_gap = 0, min_slack = 1e300;
    for (std::int64_t n = 1; n <= 32; ++n)
      for (std::int64_t m = 0; m < n; ++m) {
        SolverOptions so;
        if (d == 1) so.solver = LinearSolver::direct;
        const double R = lattice_ball_resistance(d, m, n, so);
        const double b = nash_williams_bound(d, m, n);
        ++total;
        const bool good = d == 1 ? std::abs(R - b) <= 1e-10 : R >= b * (1 - 1e-9);
        ok += good;
        worst_gap = std::max(worst_gap, std::abs(R - b));
        min_slack = std::min(min_slack, R - b);
      }
    if (d == 1)
      out.push_back({"nash-williams d=1 equality", ok == total,
                     fmt("%d/%d pairs 0<=m<n<=32 equal, max |R-bound| %.2e", ok, total, worst_gap)});
    else
      out.push_back({"nash-williams d=2 inequality", ok == total,
                     fmt("%d/%d pairs 0<=m<n<=32 satisfy R >= bound, min R-bound %.4g", ok, total, min_slack)});
  }
  return out;
}

std::vector<Check> suite_cutoff(const VerifyOptions&) {
  std::vector<Check> out;
  auto model = [](int d, double s) {
    LrpParams p;
    p.d = d;
    p.s = s;
    return p;
  };
  auto slope_check = [&](int d, double s, double beta, int k0, int k1) {
    std::vector<double> x, y;
    double worst_partition = 0;
    for (int k = k0; k <= k1; ++k) {
      const double N = std::ldexp(1.0, k);
      const auto spec = CutoffSpec::with_beta(d, N, beta);
      const double e = expected_cutoff_energy(model(d, s), spec);
      const auto b = energy_breakdown(model(d, s), spec);
      worst_partition = std::max(worst_partition, std::abs(b.total() - 2 * e) / (2 * e));
      x.push_back(std::log(N));
      y.push_back(std::log(e));
    }
    const double slope = fit_line(x, y).slope;
    out.push_back({fmt("cutoff slope d=%d s=%g", d, s), std::abs(slope - (2 * d - s)) <= 0.10,
                   fmt("slope %.4f over N=2^%d..2^%d, beta=%g, target %g +- 0.10", slope, k0, k1, beta, 2 * d - s)});
    out.push_back({fmt("partition identity d=%d s=%g", d, s), worst_partition <= 1e-9,
                   fmt("max |S1+S2+S3+S4-2E|/2E = %.2e", worst_partition)});
  };
  slope_check(1, 1.5, 2.0, 6, 12);
  slope_check(2, 3.0, 2.0, 4, 8);

  auto ratio_check = [&](const char* name, double s, const std::function<double(double)>& beta_of,
                         const std::function<double(double, double, double)>& norm) {
    double lo = 1e300, hi = 0;
    for (int k = 4; k <= 8; ++k) {
      const double N = std::ldexp(1.0, k);
      const double beta = beta_of(N);
      const double r = norm(expected_cutoff_energy(model(2, s), CutoffSpec::with_beta(2, N, beta)), N, beta);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.push_back({name, hi <= 2 * lo, fmt("ratio in [%.4f, %.4f] over N=2^4..2^8 (max/min %.3f)", lo, hi, hi / lo)});
  };
  const auto fixed = [](double) { return 4.0; };
  const auto logb = [](double N) { return std::max(2.0, std::log(N)); };
  ratio_check("critical d=2 s=4: E/(beta log(N/beta))", 4.0, fixed,
              [](double e, double N, double b) { return e / (b * std::log(N / b)); });
  ratio_check("gaussian d=2 s=5: E/beta, beta=4", 5.0, fixed, [](double e, double, double b) { return e / b; });
  ratio_check("gaussian d=2 s=5: E/beta, beta=log N", 5.0, logb, [](double e, double, double b) { return e / b; });

  const auto st = energy_breakdown(model(1, 1.5), CutoffSpec::with_beta(1, 1024, 2));
  out.push_back({"stable d=1 s=1.5: S1 dominates", st.S1 >= std::max({st.S2, st.S3, st.S4}),
                 fmt("S1..S4 = %.4g %.4g %.4g %.4g at N=1024", st.S1, st.S2, st.S3, st.S4)});
  const auto ga = energy_breakdown(model(2, 5), CutoffSpec::with_beta(2, 128, 4));
  out.push_back({"gaussian d=2 s=5: S4 dominates", ga.S4 >= std::max({ga.S1, ga.S2, ga.S3}),
                 fmt("S1..S4 = %.4g %.4g %.4g %.4g at N=128", ga.S1, ga.S2, ga.S3, ga.S4)});
  return out;
}

struct CovInstance {
  int group;
  LatticeFunction fa, fb;
  Point ca, cb;  // centres
  double N;      // support radius used by the lemma form
};

LatticeFunction cutoff_function(int d, double N, double M, const Point& c) {
  LatticeFunction f;
  const CutoffSpec spec{d, N, M, Norm::euclidean, c};
  for_each_in_cube(d, static_cast<std::int64_t>(N), [&](const Point& off) {
    Point x{};
    for (int i = 0; i < d; ++i) x[i] = c[i] + off[i];
    const double v = spec(x);
    if (v != 0) f.push_back({x, v});
  });
  return f;
}

std::vector<Check> suite_covariance(const VerifyOptions& o) {
  const Point o0{};
  auto p1 = [](std::int64_t a) { return Point{a, 0, 0, 0}; };
  auto p2 = [](std::int64_t a, std::int64_t b) { return Point{a, b, 0, 0}; };
  const std::vector<CovInstance> inst{
      {0, {{o0, 1.0}}, {{p1(3), 1.0}}, o0, p1(3), 0},
      {0, {{o0, 1.0}}, {{o0, 1.0}}, o0, o0, 0},
      {0, cutoff_function(1, 3, 1, o0), cutoff_function(1, 3, 1, p1(10)), o0, p1(10), 3},
      {0, cutoff_function(1, 3, 2, o0), cutoff_function(1, 2, 1, p1(1)), o0, p1(1), 3},
      {0, {{o0, 1.0}, {p1(1), -1.0}}, {{p1(1), 0.5}, {p1(5), 1.0}}, o0, p1(3), 2},
      {1, {{o0, 1.0}}, {{p2(1, 1), 1.0}}, o0, p2(1, 1), 0},
      {1, cutoff_function(2, 2, 1, o0), cutoff_function(2, 2, 1, p2(6, 0)), o0, p2(6, 0), 2},
      {1, cutoff_function(2, 2, 1, o0), cutoff_function(2, 2, 1, p2(1, 0)), o0, p2(1, 0), 2},
      {1, {{o0, 1.0}}, {{o0, 1.0}}, o0, o0, 0},
      {1, {{o0, 0.3}, {p2(1, 0), 1.0}, {p2(0, 2), -0.5}}, {{p2(1, 0), 1.0}, {p2(3, 3), 0.7}}, o0, p2(2, 2), 2},
  };
  LrpParams g0;
  g0.d = 1;
  g0.s = 3;
  g0.q = 0.7;
  g0.n = 64;
  LrpParams g1;
  g1.d = 2;
  g1.s = 5;
  g1.q = 0.6;
  g1.n = 16;
  const LrpParams groups[2] = {g0, g1};
  const std::int64_t reps = 10000;

  std::vector<std::vector<double>> ea(inst.size(), std::vector<double>(reps)), eb = ea;
  for (int grp = 0; grp < 2; ++grp) {
    const Box box(groups[grp].d, groups[grp].n);
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> fields;
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (inst[i].group != grp) continue;
      Eigen::VectorXd a = Eigen::VectorXd::Zero(box.size()), b = a;
      for (const auto& [x, v] : inst[i].fa) a[box.index(x)] = v;
      for (const auto& [x, v] : inst[i].fb) b[box.index(x)] = v;
      fields.emplace_back(a, b);
      ids.push_back(i);
    }
    parallel_for(reps, o.threads, [&](std::int64_t r) {
      LrpParams p = groups[grp];
      p.seed = derive_seed(o.seed, Stream::replicate, 1100 + grp, r);
      const auto env = sample_environment(p);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        ea[ids[k]][r] = dirichlet_energy<double>(env.graph, fields[k].first);
        eb[ids[k]][r] = dirichlet_energy<double>(env.graph, fields[k].second);
      }
    });
  }

  int agree = 0, nonneg = 0;
  std::string detail;
  std::vector<double> exact(inst.size()), form(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const auto& in = inst[i];
    const auto& p = groups[in.group];
    exact[i] = exact_energy_covariance(p, in.fa, in.fb);
    const auto ma = mean_stat(ea[i]), mb = mean_stat(eb[i]);
    std::vector<double> prod(reps);
    for (std::int64_t r = 0; r < reps; ++r) prod[r] = (ea[i][r] - ma.mean) * (eb[i][r] - mb.mean);
    const auto mp = mean_stat(prod);
    const double cov = mp.mean * static_cast<double>(reps) / static_cast<double>(reps - 1);
    const double z = mp.stderr_ > 0 ? (cov - exact[i]) / mp.stderr_ : (cov == exact[i] ? 0.0 : 1e9);
    agree += std::abs(z) <= 4.0;
    nonneg += exact[i] >= 0;
    double sa = 0, sb = 0;
    for (const auto& [x, v] : in.fa) sa = std::max(sa, std::abs(v));
    for (const auto& [x, v] : in.fb) sb = std::max(sb, std::abs(v));
    Point diff{};
    for (int k = 0; k < p.d; ++k) diff[k] = in.cb[k] - in.ca[k];
    form[i] = covariance_lemma_form(p.d, p.s, std::max(1.0, in.N), sa, sb, norm_of(diff, p.d, Norm::euclidean));
    detail += fmt("%s#%zu exact %.5g mc %.5g z %.2f", i ? "; " : "", i + 1, exact[i], cov, z);
  }
  double C = 0;
  for (std::size_t i = 0; i < inst.size(); ++i) C = std::max(C, exact[i] / form[i]);
  bool under = true;
  for (std::size_t i = 0; i < inst.size(); ++i) under = under && exact[i] <= C * form[i] * (1 + 1e-12);
  const int n = static_cast<int>(inst.size());
  return {{"covariance exact vs monte carlo", agree == n,
           fmt("%d/%d within 4 stderr over %lld environments: ", agree, n, static_cast<long long>(reps)) + detail},
          {"covariance non-negative and under the lemma form", nonneg == n && under,
           fmt("%d/%d non-negative; fitted constant C = %.4g over this family", nonneg, n, C)}};
}

std::vector<Check> suite_conditions(const VerifyOptions& o) {
  std::vector<Check> out;
  LrpParams p;
  p.d = 1;
  p.s = 1.5;
  p.q = 1;
  p.seed = derive_seed(o.seed, Stream::instance, 1200);
  const auto rep = check_A1_A2(p, {256, 512, 1024, 2048}, 100, {0.01, 0.02, 0.05}, o.threads);
  std::string er, ps;
  for (const auto& row : rep.rows) {
    er += fmt("%s%lld:%.4f", er.empty() ? "" : " ", static_cast<long long>(row.n), row.edge_ratio_sq);
    ps += fmt("%sn=%lld:", ps.empty() ? "" : " ", static_cast<long long>(row.n));
    for (double v : row.pistar_sq_over_eps) ps += fmt(" %.4f", v);
  }
  out.push_back({"A1 plateau d=1 s=1.5", rep.edge_ratio_plateau, "E[(|E_n|/|V_n|)^2] by n: " + er});
  out.push_back({"A2 bounded for eps in {0.01,0.02,0.05}", rep.pistar_bounded,
                 "E[pi*(eps)^2]/eps by n and eps: " + ps});

  int same = 0;
  const int graphs = 500;
  std::vector<char> ok(graphs, 0);
  parallel_for(graphs, o.threads, [&](std::int64_t i) {
    StreamRng rng(o.seed, Stream::instance, 12000 + static_cast<std::uint64_t>(i));
    const int n = 2 + static_cast<int>(rng() % 19);
    const auto g = random_connected_graph(rng, n, 2.0);
    const double eps = 0.05 + 0.55 * rng.uniform();
    const int k = std::min(n, static_cast<int>(std::floor(eps * n + 1e-12)));
    std::vector<char> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + k, 1);
    std::sort(pick.begin(), pick.end());
    double best = 0;
    do {
      double s = 0;
      for (int v = 0; v < n; ++v)
        if (pick[v]) s += g.degree(v);
      best = std::max(best, s);
    } while (std::next_permutation(pick.begin(), pick.end()));
    ok[i] = std::abs(pi_star(g, eps) - best / (2.0 * g.edge_count())) <= 1e-14;
  });
  for (char c : ok) same += c;
  out.push_back({"pi* greedy equals brute force", same == graphs, fmt("%d/%d tiny graphs", same, graphs)});

  LrpParams lat = p;
  lat.d = 2;
  lat.s = 3;
  const auto v = check_condition_V(lat, {0.01, 0.05, 0.1, 0.25}, {8, 16, 32}, 10, o.threads);
  bool all_one = true;
  for (const auto& row : v) all_one = all_one && row.p_hat == 1.0;
  out.push_back({"condition V trivial for q=1", all_one, fmt("%zu (n, c) cells, all estimates 1", v.size())});
  return out;
}

std::vector<Check> suite_potential(const VerifyOptions& o) {
  std::vector<Check> out;
  const int caps = 60;
  std::vector<double> duality(caps), inf_slack(caps), range_err(caps);
  std::vector<int> solves_ok(caps, 0);
  parallel_for(caps, o.threads, [&](std::int64_t i) {
    StreamRng rng(o.seed, Stream::instance, 9000 + static_cast<std::uint64_t>(i));
    const auto g = random_instance_graph(rng, derive_seed(o.seed, Stream::instance, 9000, i), 200);
    const auto cap = random_capacitor(rng, g.vertex_count());
    const auto sol = solve_capacitor(g, cap);
    duality[i] = std::abs(sol.energy - sol.flux) / std::max(sol.energy, 1.0);
    double lo = 0, hi = 0;
    for (Eigen::Index k = 0; k < sol.values.size(); ++k) {
      lo = std::min(lo, sol.values[k]);
      hi = std::max(hi, sol.values[k]);
    }
    range_err[i] = std::max(-lo, hi - 1.0);
    double slack = 1e300;
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd psi = Eigen::VectorXd::Zero(g.vertex_count());
      for (Vertex v : cap.Omega) psi[v] = rng.uniform();
      for (Vertex a : cap.A) psi[a] = 1.0;
      slack = std::min(slack, 2.0 * dirichlet_energy<double>(g, psi) - sol.capacity);
    }
    inf_slack[i] = slack;
  });
  const double worst_duality = *std::max_element(duality.begin(), duality.end());
  const double worst_range = *std::max_element(range_err.begin(), range_err.end());
  const double min_slack = *std::min_element(inf_slack.begin(), inf_slack.end());
  out.push_back({"energy-flux duality", worst_duality <= 1e-8,
                 fmt("max |energy - flux| / max(energy, 1) = %.2e over %d solves", worst_duality, caps)});
  out.push_back({"maximum principle", worst_range <= 1e-12, fmt("max excursion outside [0,1]: %.2e", worst_range)});
  out.push_back({"infimum property", min_slack >= -1e-12,
                 fmt("min 2E(psi) - cap = %.4g over %d capacitors x 100 test functions", min_slack, caps)});

  const auto lat = lattice_environment(1, 5);
  const auto z = static_cast<Vertex>(lat.box.origin());
  const double c = solve_capacitor(lat.graph, {{z}, {z - 1, z, z + 1}}).capacity;
  out.push_back({"path capacitor closed form", std::abs(c - 2.0) <= 1e-10, fmt("cap = %.15g, expected 2", c)});

  int rayleigh = 0, relation = 0;
  const int inserts = 200;
  std::vector<char> ok(inserts, 0), rel(inserts, 0);
  parallel_for(inserts, o.threads, [&](std::int64_t i) {
    StreamRng rng(o.seed, Stream::instance, 9500 + static_cast<std::uint64_t>(i));
    const int n = 6 + static_cast<int>(rng() % 40);
    const auto g = random_connected_graph(rng, n, 1.0);
    if (g.edge_count() == static_cast<std::int64_t>(n) * (n - 1) / 2) {
      ok[i] = rel[i] = 1;
      return;
    }
    Vertex u = 0, v = 0;
    do {
      u = static_cast<Vertex>(rng() % static_cast<std::uint64_t>(n));
      v = static_cast<Vertex>(rng() % static_cast<std::uint64_t>(n));
    } while (u == v || g.has_edge(u, v));
    auto edges = g.edges();
    edges.push_back({u, v});
    const auto h = Graph::from_edges(n, edges);
    const std::vector<Vertex> A{0}, B{static_cast<Vertex>(n - 1)};
    const double before = effective_resistance(g, A, B).value;
    ok[i] = effective_resistance(h, A, B).value <= before * (1 + 1e-10);
    Capacitor cap;
    cap.A = A;
    for (Vertex w = 0; w + 1 < n; ++w) cap.Omega.push_back(w);
    rel[i] = std::abs(before - 2.0 / solve_capacitor(g, cap).capacity) <= 1e-9 * before;
  });
  for (int i = 0; i < inserts; ++i) {
    rayleigh += ok[i];
    relation += rel[i];
  }
  out.push_back({"Rayleigh monotonicity", rayleigh == inserts, fmt("%d/%d edge insertions", rayleigh, inserts)});
  out.push_back({"R(A,B) = 2 / cap_{V\\B}(A)", relation == inserts, fmt("%d/%d graphs", relation, inserts)});
  return out;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"kpr", "nash-williams", "cutoff-energy", "covariance", "conditions",
                                              "potential"};
  return names;
}

SuiteReport run_verify_suite(const std::string& suite, const VerifyOptions& options) {
  static const std::map<std::string, std::function<std::vector<Check>(const VerifyOptions&)>> table{
      {"kpr", suite_kpr},           {"nash-williams", suite_nash_williams},
      {"cutoff-energy", suite_cutoff}, {"covariance", suite_covariance},
      {"conditions", suite_conditions}, {"potential", suite_potential}};
  const auto it = table.find(suite);
  if (it == table.end()) fail(ErrorKind::invalid_argument, "unknown verification suite: " + suite);
  const auto start = std::chrono::steady_clock::now();
  SuiteReport r;
  r.suite = suite;
  r.checks = it->second(options);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace lrp
