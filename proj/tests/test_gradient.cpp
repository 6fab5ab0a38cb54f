#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "vlasov/gradient.hpp"
#include "vlasov/random.hpp"

using namespace vlasov;

namespace {

Lattice random_lattice(std::size_t nk, std::size_t nx, RandomStream& rng) {
  Lattice u(nk, nx);
  for (auto& v : u.data) v = rng.normal();
  return u;
}

}  // namespace

TEST_CASE("trapezoid time weights") {
  CHECK(time_weight(0, 4) == 0.5);
  CHECK(time_weight(2, 4) == 1.0);
  CHECK(time_weight(4, 4) == 0.5);
  const TimeGrid t(2.0, 4);
  const PhaseGrid g(3.0, 1.0, 3, 2);
  const Lattice one(5, 3, 1.0);
  CHECK(inner_L2(one, one, t, g) == doctest::Approx(2.0 * 3.0));
}

TEST_CASE("elliptic operator, lift and duality on an 8x8 lattice") {
  const TimeGrid time(1.4, 7);  // 8 time levels
  const PhaseGrid grid(5.0, 1.0, 8, 2);
  const PenaltyConfig pen{1e-3, 0.7, 1.3};
  const std::size_t n = 64;

  // dense operator column by column
  Eigen::MatrixXd A(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Lattice e(8, 8);
    e.data[j] = 1.0;
    const Lattice col = apply_elliptic(e, time, grid, pen.kappa_t, pen.kappa_x);
    for (std::size_t r = 0; r < n; ++r) A(r, j) = col.data[r];
  }

  RandomStream rng(5);
  const Lattice g = random_lattice(8, 8, rng);
  const Lattice u = lift_to_V(g, time, grid, pen);
  Eigen::VectorXd gv(n), uv(n);
  for (std::size_t j = 0; j < n; ++j) {
    gv[j] = g.data[j];
    uv[j] = u.data[j];
  }
  const Eigen::VectorXd dense = A.fullPivLu().solve(gv);
  CHECK((A * uv - gv).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((uv - dense).cwiseAbs().maxCoeff() <= 1e-10);

  // (lift g, H)_V == (g, H)_L2
  for (int r = 0; r < 10; ++r) {
    const Lattice h = random_lattice(8, 8, rng);
    const double lhs = inner_V(u, h, time, grid, pen);
    const double rhs = inner_L2(g, h, time, grid);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }

  // grad_L2 = alpha A B + G
  const Lattice B = random_lattice(8, 8, rng);
  const Lattice G = random_lattice(8, 8, rng);
  const ControlField c(time, grid, B);
  const Lattice gl2 = assemble_grad_L2(G, c, pen);
  Eigen::VectorXd bv(n);
  for (std::size_t j = 0; j < n; ++j) bv[j] = B.data[j];
  const Eigen::VectorXd expect = pen.alpha * (A * bv);
  for (std::size_t j = 0; j < n; ++j) CHECK(gl2.data[j] == doctest::Approx(expect[j] + G.data[j]).epsilon(1e-12));

  // penalty derivative: d/de (alpha/2)|B + e H|_V^2 = alpha (B, H)_V = (alpha A B, H)_L2
  const Lattice h = random_lattice(8, 8, rng);
  Lattice ab(8, 8);
  for (std::size_t j = 0; j < n; ++j) ab.data[j] = expect[j];
  CHECK(pen.alpha * inner_V(B, h, time, grid, pen) == doctest::Approx(inner_L2(ab, h, time, grid)).epsilon(1e-10));
}

TEST_CASE("elliptic operator on constants is the identity") {
  const TimeGrid time(1.0, 4);
  const PhaseGrid grid(2.0, 1.0, 4, 2);
  const Lattice c(5, 4, 2.5);
  CHECK(apply_elliptic(c, time, grid, 1.0, 1.0) == c);
}

TEST_CASE("G matches brute-force quadrature on random small tensors") {
  const PhaseGrid grid(2.0, 2.0, 2, 4);  // dv = 1
  const TimeGrid time(0.2, 1);
  RandomStream rng(21);
  std::vector<PerSpecies<OccupationTensor>> f(2, {OccupationTensor(grid), OccupationTensor(grid)});
  auto lam = f;
  for (auto* set : {&f, &lam})
    for (auto& level : *set)
      for (auto& t : level)
        for (auto& v : t.counts()) v = std::floor(rng.uniform(0.0, 5.0));
  const PerSpecies<double> wf{0.3, 0.7}, wl{0.2, 0.5};
  const PerSpecies<SpeciesParams> sp{SpeciesParams::electrons(), SpeciesParams::ions(0.5, 0.2)};

  const Lattice G = assemble_G(f, wf, lam, wl, sp, time, GradientOptions{VelocityStencil::central});
  const Lattice R = assemble_G(f, wf, lam, wl, sp, time,
                               GradientOptions{VelocityStencil::central, DerivativeEstimator::tensor,
                                               GradientScaling::raw_index});
  const int nv = 4;
  const double dv = 1.0, vol = grid.cell_volume();
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < 2; ++i) {
      double cont = 0.0, raw = 0.0;
      for (std::size_t s = 0; s < 2; ++s) {
        const double mu = sp[s].mu_x * sp[s].mu_v;
        auto F = [&](int l, int m) { return wf[s] / vol * f[k][s](i, l, m); };
        auto d = [&](int l, int m, int axis) {
          auto at = [&](int j) { return axis == 1 ? F(j, m) : F(l, j); };
          const int j = axis == 1 ? l : m;
          if (j == 0) return (at(1) - at(0)) / dv;
          if (j == nv - 1) return (at(j) - at(j - 1)) / dv;
          return (at(j + 1) - at(j - 1)) / (2 * dv);
        };
        for (int l = 0; l < nv; ++l) {
          for (int m = 0; m < nv; ++m) {
            const double v1 = -2.0 + (l + 0.5) * dv, v2 = -2.0 + (m + 0.5) * dv;
            const double L = wl[s] / vol * lam[k][s](i, l, m);
            cont += mu * L * (v2 * d(l, m, 1) - v1 * d(l, m, 2)) * dv * dv;
            // raw formula, 1-based indices, empty beyond the mesh
            auto fr = [&](int ll, int mm) { return ll < nv && mm < nv ? f[k][s](i, ll, mm) : 0.0; };
            const double li = l + 1, mi = m + 1;
            raw += -mu * (li * fr(l, m + 1) - (li - mi) * fr(l, m) - mi * fr(l + 1, m)) * lam[k][s](i, l, m);
          }
        }
      }
      CHECK(G(k, i) == doctest::Approx(cont).epsilon(1e-12));
      CHECK(R(k, i) == doctest::Approx(raw * dv * dv * time.dt()).epsilon(1e-12));
    }
  }
}

TEST_CASE("particle and tensor estimators agree on smooth data") {
  // f uniform in x, Gaussian in v, shifted so the integrand does not vanish by symmetry;
  // lambda a different Gaussian. The two forms differ by quadrature and boundary terms only.
  const PhaseGrid grid(2.0, 6.0, 2, 24);
  const TimeGrid time(0.1, 1);
  RandomStream rng(4);
  std::vector<PerSpecies<std::vector<Particle>>> fp(2);
  std::vector<PerSpecies<OccupationTensor>> ft(2, {OccupationTensor(grid), OccupationTensor(grid)});
  auto lt = ft;
  for (std::size_t k = 0; k < 2; ++k) {
    for (int j = 0; j < 400000; ++j) fp[k][0].push_back({rng.uniform(0.0, 2.0), rng.normal(0.8, 1.0), rng.normal(-0.5, 1.0)});
    ft[k][0] = assemble_occupation(fp[k][0], grid);
    std::vector<Particle> lp;
    for (int j = 0; j < 400000; ++j) lp.push_back({rng.uniform(0.0, 2.0), rng.normal(0.0, 1.5), rng.normal(0.6, 1.2)});
    lt[k][0] = assemble_occupation(lp, grid);
  }
  const PerSpecies<double> w{1.0 / 400000, 1.0 / 400000};
  const PerSpecies<SpeciesParams> sp{SpeciesParams::electrons(), SpeciesParams::ions()};
  const Lattice a = assemble_G(ft, w, lt, w, sp, time, GradientOptions{});
  const Lattice b = assemble_G_particles(fp, w, lt, w, sp, time, VelocityStencil::central);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(a(0, i)) > 1e-3);
    CHECK(b(0, i) == doctest::Approx(a(0, i)).epsilon(0.05));
  }
}
