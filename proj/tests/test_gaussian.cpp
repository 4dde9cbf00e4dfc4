#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ptdiscord/dynamics.hpp"
#include "ptdiscord/gaussian.hpp"
#include "test_util.hpp"

using namespace ptdiscord;

TEST_CASE("logval arithmetic agrees with double arithmetic") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double x = dist(rng), y = dist(rng);
    const LogVal lx = LogVal::from_value(x), ly = LogVal::from_value(y);
    CHECK((lx * ly).value() == doctest::Approx(x * y).epsilon(1e-13));
    CHECK((lx + ly).value() == doctest::Approx(x + y).epsilon(1e-12).scale(1.0));
    CHECK((lx - ly).value() == doctest::Approx(x - y).epsilon(1e-12).scale(1.0));
    if (y != 0.0) CHECK((lx / ly).value() == doctest::Approx(x / y).epsilon(1e-13));
    if (x > 0.0) CHECK(lx.sqrt().value() == doctest::Approx(std::sqrt(x)).epsilon(1e-13));
    CHECK((lx < ly) == (x < y));
  }
  // Products far beyond double range survive in log form.
  const LogVal huge = LogVal::from_log(1, 600.0);
  const LogVal prod = huge * huge * huge;
  CHECK(prod.log_abs() == doctest::Approx(1800.0));
  CHECK((prod / (huge * huge)).value() == doctest::Approx(std::exp(600.0)).epsilon(1e-12));
  CHECK(LogVal::from_value(0.0).is_zero());
  CHECK((huge - huge).is_zero());
}

TEST_CASE("symplectic form squares to minus identity") {
  const Eigen::Matrix4d omega = symplectic_form();
  CHECK((omega * omega + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((omega.transpose() * omega - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("covariance matrix symmetrizes on construction") {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 3) = 2.0;
  const CovarianceMatrix sigma(m);
  CHECK(sigma(0, 3) == doctest::Approx(1.0));
  CHECK(sigma(3, 0) == doctest::Approx(1.0));
  CHECK(CovarianceMatrix::vacuum().matrix() == Eigen::Matrix4d::Identity());
}

TEST_CASE("entropy_f: boundary values and branches") {
  CHECK(entropy_f(1.0) == 0.0);
  CHECK(entropy_f(3.0) == doctest::Approx(2.0 * std::numbers::ln2).epsilon(1e-14));
  CHECK(entropy_f(1.0 - 5e-10) == 0.0);  // clamp band
  CHECK_THROWS_AS(entropy_f(1.0 - 2e-9), std::domain_error);
  CHECK_THROWS_AS(entropy_f(0.0), std::domain_error);

  // Asymptotic branch against a long-double evaluation of the exact branch
  // in its cancellation-free form u ln(u/v) + ln v.
  const auto exact_ld = [](long double x) -> long double {
    const long double u = 0.5L * (x + 1.0L);
    return u * std::log1p(2.0L / (x - 1.0L)) + std::log(0.5L * (x - 1.0L));
  };
  const double f12 = entropy_f(1e12);
  CHECK(f12 == doctest::Approx(std::log(5e11) + 1.0).epsilon(1e-15));
  CHECK(std::abs(f12 - static_cast<double>(exact_ld(1e12L))) / f12 < 1e-12);

  // Branch agreement at the switchover.
  const double below = entropy_f(tol::entropy_asymptotic_x);
  const double above = std::log(0.5 * tol::entropy_asymptotic_x) + 1.0;
  CHECK(std::abs(below - above) / above < 1e-10);

  // Strictly increasing.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double a = 1.0 + dist(rng), step = 1e-4 + dist(rng);
    CHECK(entropy_f(a + step) > entropy_f(a));
  }
}

TEST_CASE("entropy_f_log matches entropy_f and extends past double range") {
  for (double x : {1.0, 1.5, 3.0, 50.0, 1e6, 1e10}) {
    CHECK(entropy_f_log(std::log(x)) == doctest::Approx(entropy_f(x)).epsilon(1e-12));
  }
  CHECK(entropy_f_log(900.0) == doctest::Approx(900.0 - std::numbers::ln2 + 1.0));
}

TEST_CASE("symplectic eigenvalues: vacuum and uncoupled thermal modes") {
  const auto [nm_vac, np_vac] = symplectic_eigenvalues(CovarianceMatrix::vacuum());
  CHECK(nm_vac == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(np_vac == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::Vector4d diag(2.0, 2.0, 5.0, 5.0);
  const auto [nm, np] = symplectic_eigenvalues(CovarianceMatrix(diag.asDiagonal()));
  CHECK(nm == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(np == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("symplectic eigenvalues: determinant identity and homogeneity on random states") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const CovarianceMatrix sigma = test_util::random_physical_sigma(rng);
    const auto [nm, np] = symplectic_eigenvalues(sigma);
    const double det = sigma.matrix().determinant();
    CHECK(std::abs(nm * nm * np * np - det) / det < 1e-10);

    const double s = 0.5 + 3.0 * std::generate_canonical<double, 53>(rng);
    const auto [nms, nps] = symplectic_eigenvalues(CovarianceMatrix(s * sigma.matrix()));
    CHECK(nms == doctest::Approx(s * nm).epsilon(1e-12));
    CHECK(nps == doctest::Approx(s * np).epsilon(1e-12));
  }
}

TEST_CASE("symplectic eigenvalues of product-form states permute the block roots") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> nu(1.0, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    // Independent single-mode squeezed-thermal blocks, no cross block.
    const double n1 = nu(rng), n2 = nu(rng), r1 = 0.4 * nu(rng), r2 = 0.3 * nu(rng);
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m.topLeftCorner<2, 2>() = n1 * Eigen::Vector2d(std::exp(2 * r1), std::exp(-2 * r1)).asDiagonal();
    m.bottomRightCorner<2, 2>() =
        n2 * Eigen::Vector2d(std::exp(2 * r2), std::exp(-2 * r2)).asDiagonal();
    const CovarianceMatrix sigma(m);
    const SymplecticInvariants inv = invariants(sigma);
    const auto [nm, np] = symplectic_eigenvalues(sigma);
    CHECK(nm == doctest::Approx(std::min(std::sqrt(inv.a), std::sqrt(inv.b))).epsilon(1e-10));
    CHECK(np == doctest::Approx(std::max(std::sqrt(inv.a), std::sqrt(inv.b))).epsilon(1e-10));
  }
}

TEST_CASE("symplectic eigenvalue error path: inconsistent invariants") {
  SymplecticInvariants inv;
  inv.a = inv.b = 1.0;
  inv.c = 0.0;
  inv.d = 10.0;  // Delta^2 - 4d = 4 - 40 < 0
  inv.log_a = inv.log_b = LogVal::from_value(1.0);
  inv.log_c = LogVal::from_value(0.0);
  inv.log_d = LogVal::from_value(10.0);
  CHECK_THROWS_AS(symplectic_eigenvalues_sq(inv), std::runtime_error);
}

TEST_CASE("invariants: identity, block-diagonal, scaling") {
  const SymplecticInvariants id = invariants(CovarianceMatrix::vacuum());
  CHECK(id.a == doctest::Approx(1.0));
  CHECK(id.b == doctest::Approx(1.0));
  CHECK(id.c == doctest::Approx(0.0).scale(1.0));
  CHECK(id.d == doctest::Approx(1.0));

  Eigen::Vector4d diag(2.0, 2.0, 3.0, 3.0);
  const SymplecticInvariants bd = invariants(CovarianceMatrix(diag.asDiagonal()));
  CHECK(bd.a == doctest::Approx(4.0));
  CHECK(bd.b == doctest::Approx(9.0));
  CHECK(bd.c == doctest::Approx(0.0).scale(1.0));
  CHECK(bd.d == doctest::Approx(36.0));

  std::mt19937 rng(17);
  const CovarianceMatrix sigma = test_util::random_physical_sigma(rng);
  const SymplecticInvariants inv1 = invariants(sigma);
  const double s = 1.7;
  const SymplecticInvariants inv2 = invariants(CovarianceMatrix(s * sigma.matrix()));
  CHECK(inv2.a == doctest::Approx(s * s * inv1.a).epsilon(1e-12));
  CHECK(inv2.b == doctest::Approx(s * s * inv1.b).epsilon(1e-12));
  CHECK(inv2.c == doctest::Approx(s * s * inv1.c).epsilon(1e-12));
  CHECK(inv2.d == doctest::Approx(s * s * s * s * inv1.d).epsilon(1e-12));
}

TEST_CASE("invariants: log domain absorbs entries past 1e50") {
  const double big = 1e80;
  Eigen::Vector4d diag(big, big, 2.0 * big, 2.0 * big);
  const SymplecticInvariants inv = invariants(CovarianceMatrix(diag.asDiagonal()));
  CHECK(inv.log_a.log_abs() == doctest::Approx(2.0 * std::log(big)).epsilon(1e-13));
  CHECK(inv.log_d.log_abs() ==
        doctest::Approx(4.0 * std::log(big) + 2.0 * std::numbers::ln2).epsilon(1e-13));
  CHECK(std::isinf(inv.d));  // linear field saturates, log field carries it
  const auto [nm2, np2] = symplectic_eigenvalues_sq(inv);
  CHECK(std::exp(0.5 * nm2.log_abs()) == doctest::Approx(big).epsilon(1e-12));
  CHECK(std::exp(0.5 * np2.log_abs()) == doctest::Approx(2.0 * big).epsilon(1e-12));
}

TEST_CASE("matrix exponential: closed forms") {
  CHECK(matrix_exponential(Eigen::Matrix4d(Eigen::Matrix4d::Zero()), 3.0)
            .isApprox(Eigen::Matrix4d::Identity(), 1e-15));

  // Beam-splitter generator: exp gives the rotation.
  const std::complex<double> i(0.0, 1.0);
  const double g = 0.8, t = 1.3;
  Eigen::Matrix2cd bs;
  bs << 0.0, -i * g, -i * g, 0.0;
  const Eigen::Matrix2cd u = matrix_exponential(bs, t);
  CHECK(std::abs(u(0, 0) - std::cos(g * t)) < 1e-12);
  CHECK(std::abs(u(0, 1) - (-i * std::sin(g * t))) < 1e-12);
  CHECK(std::abs(u(1, 0) - (-i * std::sin(g * t))) < 1e-12);
  CHECK(std::abs(u(1, 1) - std::cos(g * t)) < 1e-12);

  // Defective Jordan block: exp(Mt) = e^{lambda t} [[1, t], [0, 1]].
  const double lambda = -0.4, tj = 2.5;
  Eigen::Matrix2d jordan;
  jordan << lambda, 1.0, 0.0, lambda;
  const Eigen::Matrix2d ej = matrix_exponential(jordan, tj);
  const double el = std::exp(lambda * tj);
  CHECK(ej(0, 0) == doctest::Approx(el).epsilon(1e-13));
  CHECK(ej(0, 1) == doctest::Approx(el * tj).epsilon(1e-13));
  CHECK(ej(1, 0) == doctest::Approx(0.0).scale(1.0));
  CHECK(ej(1, 1) == doctest::Approx(el).epsilon(1e-13));
}

TEST_CASE("matrix exponential: Taylor oracle and semigroup property") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = dist(rng);
    const double t = 0.5 + std::generate_canonical<double, 53>(rng);

    const Eigen::Matrix4d viaexp = matrix_exponential(m, t);
    const Eigen::Matrix4d viataylor = test_util::taylor_exp(m, t, 40);
    CHECK((viaexp - viataylor).cwiseAbs().maxCoeff() /
              viataylor.cwiseAbs().maxCoeff() < 1e-12);

    // exp(M t1) exp(M t2) = exp(M (t1 + t2)) with ||M (t1+t2)|| <= 20.
    const double t1 = 2.0 * t, t2 = 3.0 * t;
    const Eigen::Matrix4d lhs = matrix_exponential(m, t1) * matrix_exponential(m, t2);
    const Eigen::Matrix4d rhs = matrix_exponential(m, t1 + t2);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() /
              std::max(1.0, rhs.cwiseAbs().maxCoeff()) < 1e-10);
  }
}

TEST_CASE("matrix exponential: overflow guard") {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = 670.0;  // e^670 ~ 8e290
  CHECK_THROWS_AS(matrix_exponential(m, 1.0), OverflowError);
  m(0, 0) = 660.0;  // e^660 ~ 4e286 stays under the guard
  CHECK_NOTHROW(matrix_exponential(m, 1.0));
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matrix_exponential(m, 1.0), std::invalid_argument);
}

TEST_CASE("lyapunov solve: scalar balance") {
  const CovarianceMatrix s =
      lyapunov_solve(-Eigen::Matrix4d::Identity(), 2.0 * Eigen::Matrix4d::Identity());
  CHECK((s.matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("lyapunov solve: gain-loss fixed point against an independent integration") {
  const SystemParams p = SystemParams::gain_loss(1.0, 0.2, 0.5);
  const Eigen::Matrix4d y = drift_matrix(p);
  const Eigen::Matrix4d q = 4.0 * diffusion_matrix(p);
  const CovarianceMatrix direct = lyapunov_solve(y, q);

  const Eigen::Matrix4d integrated =
      test_util::integrate_lyapunov_ode(y, q, Eigen::Matrix4d::Identity(), 200.0, 2e-3);
  CHECK((direct.matrix() - integrated).cwiseAbs().maxCoeff() < 1e-6);

  // The fixed point is rational here: diag (67/27, 67/27, 73/27, 73/27),
  // anti-diagonal couplings +-20/27.
  CHECK(direct(0, 0) == doctest::Approx(67.0 / 27.0).epsilon(1e-12));
  CHECK(direct(2, 2) == doctest::Approx(73.0 / 27.0).epsilon(1e-12));
  CHECK(direct(0, 3) == doctest::Approx(20.0 / 27.0).epsilon(1e-12));
  CHECK(direct(1, 2) == doctest::Approx(-20.0 / 27.0).epsilon(1e-12));

  const double residual = (y * direct.matrix() + direct.matrix() * y.transpose() + q)
                              .cwiseAbs()
                              .maxCoeff();
  CHECK(residual < tol::residual);
}

TEST_CASE("lyapunov solve: residual and positive-definiteness on random stable drifts") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::Matrix4d a, b;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        a(i, j) = dist(rng);
        b(i, j) = dist(rng);
      }
    const Eigen::EigenSolver<Eigen::Matrix4d> es(a);
    const double shift = es.eigenvalues().real().maxCoeff() + 0.3;
    const Eigen::Matrix4d y = a - shift * Eigen::Matrix4d::Identity();
    const Eigen::Matrix4d q = b * b.transpose() + 0.1 * Eigen::Matrix4d::Identity();

    const CovarianceMatrix s = lyapunov_solve(y, q);
    const double residual =
        (y * s.matrix() + s.matrix() * y.transpose() + q).cwiseAbs().maxCoeff();
    CHECK(residual < tol::residual * std::max(1.0, s.max_abs()));
    CHECK((s.matrix() - s.matrix().transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> sa(s.matrix());
    CHECK(sa.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("lyapunov solve: non-Hurwitz drift is rejected with its spectrum") {
  try {
    lyapunov_solve(Eigen::Matrix4d::Identity(), Eigen::Matrix4d::Identity());
    FAIL("expected NoStationarySolution");
  } catch (const NoStationarySolution& e) {
    CHECK(e.spectrum_real_parts[3] == doctest::Approx(1.0));
  }
}

TEST_CASE("ppt witness: vacuum and two-mode squeezed states") {
  CHECK(ppt_min_symplectic_eig(CovarianceMatrix::vacuum()) == doctest::Approx(1.0));
  for (double r : {0.2, 0.5, 1.0}) {
    const CovarianceMatrix tmss = test_util::two_mode_squeezed(r);
    // Pure squeezed state: nu~_- = e^{-2r} < 1 flags entanglement.
    CHECK(ppt_min_symplectic_eig(tmss) == doctest::Approx(std::exp(-2.0 * r)).epsilon(1e-12));
    const auto [nm, np] = symplectic_eigenvalues(tmss);
    CHECK(nm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(np == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("is_physical accepts generated states and rejects sub-vacuum ones") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 20; ++trial)
    CHECK(is_physical(test_util::random_physical_sigma(rng)));
  CHECK_FALSE(is_physical(CovarianceMatrix(0.5 * Eigen::Matrix4d::Identity())));
}
