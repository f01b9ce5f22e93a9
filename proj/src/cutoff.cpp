#include "lrp/cutoff.hpp"

#include <complex>
#include <map>
#include <unsupported/Eigen/FFT>

#include "lrp/error.hpp"
#include "lrp/model.hpp"

namespace lrp {

namespace {

using cplx = std::complex<double>;

std::int64_t fft_length(std::int64_t minimum) {
  std::int64_t best = std::int64_t{1} << 62;
  for (std::int64_t a = 1; a < 2 * minimum; a *= 2)
    for (std::int64_t b = a; b < 2 * minimum; b *= 3)
      for (std::int64_t c = b; c < 2 * minimum; c *= 5)
        if (c >= minimum) best = std::min(best, c);
  return best;
}

// Dense array on [-r, r]^d zero-padded into a periodic grid of side L.
class Grid {
 public:
  Grid(int d, std::int64_t r) : d_(d), r_(r), L_(fft_length(4 * r + 1)) {
    size_ = 1;
    for (int i = 0; i < d; ++i) size_ *= L_;
  }
  int dim() const { return d_; }
  std::int64_t reach() const { return r_; }
  std::int64_t side() const { return L_; }
  std::int64_t size() const { return size_; }
  std::int64_t slot(const Point& x) const {
    std::int64_t idx = 0;
    for (int i = d_ - 1; i >= 0; --i) idx = idx * L_ + ((x[i] % L_) + L_) % L_;
    return idx;
  }

  void transform(std::vector<cplx>& data, bool inverse) const {
    Eigen::FFT<double> fft;
    std::vector<cplx> line(L_), out(L_);
    std::int64_t stride = 1;
    for (int axis = 0; axis < d_; ++axis) {
      for (std::int64_t base = 0; base < size_; ++base) {
        if ((base / stride) % L_ != 0) continue;
        for (std::int64_t k = 0; k < L_; ++k) line[k] = data[base + k * stride];
        if (inverse)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (std::int64_t k = 0; k < L_; ++k) data[base + k * stride] = out[k];
      }
      stride *= L_;
    }
  }

 private:
  int d_;
  std::int64_t r_, L_, size_;
};

struct Correlator {
  const Grid& grid;
  std::vector<double> weights;  // p(v) on lag slots

  Correlator(const Grid& g, const LrpParams& params) : grid(g), weights(g.size(), 0.0) {
    for_each_in_cube(g.dim(), 2 * g.reach(), [&](const Point& v) {
      bool zero = true;
      for (int i = 0; i < g.dim(); ++i) zero = zero && v[i] == 0;
      if (!zero) weights[g.slot(v)] = edge_probability(params, v);
    });
  }

  std::vector<cplx> spectrum(const std::vector<double>& values) const {
    std::vector<cplx> data(values.begin(), values.end());
    grid.transform(data, false);
    return data;
  }

  // sum_v p(v) sum_x a(x) b(x+v)
  double weighted(const std::vector<cplx>& A, const std::vector<cplx>& B) const {
    std::vector<cplx> prod(A.size());
    for (std::size_t k = 0; k < A.size(); ++k) prod[k] = std::conj(A[k]) * B[k];
    grid.transform(prod, true);
    long double acc = 0;
    for (std::size_t k = 0; k < prod.size(); ++k)
      if (weights[k] != 0.0) acc += static_cast<long double>(weights[k]) * prod[k].real();
    return static_cast<double>(acc);
  }
};

struct Fields {
  std::vector<double> phi, inner, ramp, support, ramp_phi, ramp_phi2, ramp_gap2;
  double mass_phi2 = 0, inner_count = 0, ramp_phi2_sum = 0;
};

Fields build_fields(const Grid& grid, const CutoffSpec& phi) {
  Fields f;
  for (auto* v : {&f.phi, &f.inner, &f.ramp, &f.support, &f.ramp_phi, &f.ramp_phi2, &f.ramp_gap2})
    v->assign(grid.size(), 0.0);
  CutoffSpec centred = phi;
  centred.center = Point{};
  for_each_in_cube(grid.dim(), grid.reach(), [&](const Point& x) {
    const double r = centred.distance(x);
    if (r > phi.N) return;
    const auto k = grid.slot(x);
    const double val = centred(x);
    f.phi[k] = val;
    f.support[k] = 1.0;
    f.mass_phi2 += val * val;
    if (r <= phi.N - phi.M) {
      f.inner[k] = 1.0;
      f.inner_count += 1.0;
    } else {
      f.ramp[k] = 1.0;
      f.ramp_phi[k] = val;
      f.ramp_phi2[k] = val * val;
      f.ramp_gap2[k] = (1.0 - val) * (1.0 - val);
      f.ramp_phi2_sum += val * val;
    }
  });
  return f;
}

void check_spec(const LrpParams& params, const CutoffSpec& phi) {
  require(phi.d == params.d, "cutoff dimension differs from model dimension");
  require(phi.N >= 1 && phi.M > 0 && phi.M <= phi.N, "cutoff needs N >= 1 and 0 < M <= N");
  require(params.s > params.d, "cutoff energy needs s > d");
}

}  // namespace

double expected_cutoff_energy(const LrpParams& params, const CutoffSpec& phi, double tol) {
  check_spec(params, phi);
  const Grid grid(params.d, static_cast<std::int64_t>(std::floor(phi.N)));
  const Correlator corr(grid, params);
  const Fields f = build_fields(grid, phi);
  const double D = lattice_sum(params, SumKind::probability, tol).value;
  const auto P = corr.spectrum(f.phi);
  return f.mass_phi2 * D - corr.weighted(P, P);
}

EnergyBreakdown energy_breakdown(const LrpParams& params, const CutoffSpec& phi, double tol) {
  check_spec(params, phi);
  const Grid grid(params.d, static_cast<std::int64_t>(std::floor(phi.N)));
  const Correlator corr(grid, params);
  const Fields f = build_fields(grid, phi);
  const double D = lattice_sum(params, SumKind::probability, tol).value;
  const auto I = corr.spectrum(f.inner);
  const auto F = corr.spectrum(f.support);
  const auto R = corr.spectrum(f.ramp);
  const auto Rphi = corr.spectrum(f.ramp_phi);
  const auto Rphi2 = corr.spectrum(f.ramp_phi2);
  const auto Rgap2 = corr.spectrum(f.ramp_gap2);
  EnergyBreakdown b;
  b.S1 = 2.0 * (f.inner_count * D - corr.weighted(I, F));
  b.S2 = 2.0 * corr.weighted(I, Rgap2);
  b.S3 = 2.0 * (f.ramp_phi2_sum * D - corr.weighted(Rphi2, F));
  b.S4 = 2.0 * corr.weighted(Rphi2, R) - 2.0 * corr.weighted(Rphi, Rphi);
  return b;
}

double exact_energy_covariance(const LrpParams& params, const LatticeFunction& fa, const LatticeFunction& fb,
                               double tol) {
  const int d = params.d;
  std::map<Point, std::pair<double, double>> u;
  for (const auto& [x, v] : fa) {
    require(!u.count(x) || u[x].first == 0.0, "f_a lists a point twice");
    u[x].first = v;
  }
  for (const auto& [x, v] : fb) {
    require(!u.count(x) || u[x].second == 0.0, "f_b lists a point twice");
    u[x].second = v;
  }
  std::vector<std::pair<Point, std::pair<double, double>>> pts(u.begin(), u.end());
  auto var = [&](const Point& x, const Point& y) {
    Point v{};
    for (int i = 0; i < d; ++i) v[i] = y[i] - x[i];
    const double p = edge_probability(params, v);
    return p * (1.0 - p);
  };
  long double acc = 0;
  bool need_tail = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double da = pts[i].second.first - pts[j].second.first;
      const double db = pts[i].second.second - pts[j].second.second;
      if (da == 0.0 || db == 0.0) continue;
      acc += var(pts[i].first, pts[j].first) * da * da * db * db;
    }
    need_tail = need_tail || (pts[i].second.first != 0.0 && pts[i].second.second != 0.0);
  }
  if (need_tail) {
    // pairs from a point of both supports to every lattice point outside the union
    const double V2 = lattice_sum(params, SumKind::variance, tol).value;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto [a, b] = pts[i].second;
      if (a == 0.0 || b == 0.0) continue;
      double inside = 0;
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (j != i) inside += var(pts[i].first, pts[j].first);
      acc += static_cast<long double>(a * a * b * b) * (V2 - inside);
    }
  }
  return static_cast<double>(acc);
}

double covariance_lemma_form(int d, double s, double N, double fa_sup, double fb_sup, double separation) {
  const double gap = std::max(0.0, separation - 2.0 * N);
  return std::pow(N, 4.0 * d) * fa_sup * fa_sup * fb_sup * fb_sup / (std::pow(gap, 2.0 * s) + 1.0);
}

}  // namespace lrp
