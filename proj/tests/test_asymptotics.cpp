#include <doctest.h>

#include <cmath>
#include <iostream>

#include "sturm_delay/asymptotics.hpp"
#include "sturm_delay/spectrum.hpp"
#include "support/oracles.hpp"
#include "support/problems.hpp"

using namespace sturm_delay;
namespace tt = sturm_delay::testing;

TEST_CASE("leading-order parameter") {
  CHECK(mu_leading(1) == 1.25);
  CHECK(mu_leading(4) == 4.25);
  CHECK(mu_leading(100) == 100.25);
  CHECK_THROWS_AS(mu_leading(0), std::invalid_argument);
}

TEST_CASE("retard-weighted potential integral") {
  CHECK(q_delay_integral(tt::const_q_problem(1.0), 3) ==
        doctest::Approx(kPi).epsilon(1e-10));
  CHECK(q_delay_integral(tt::zero_problem(), 5) == doctest::Approx(0.0));

  // Unit potential on the first segment only.
  ProblemSpec s1only = tt::zero_problem();
  s1only.q.on(SegmentId::S1) = ConstantFn{1.0};
  CHECK(q_delay_integral(s1only, 7) == doctest::Approx(1.0).epsilon(1e-10));

  // Full-slope retardation gives a per-segment closed form:
  // int cos(m (t - start)) dt = sin(m len) / m.
  ProblemSpec slope1 = tt::const_q_problem(1.0);
  slope1.retard.on(SegmentId::S1) = PolynomialFn{{0.0, 1.0}};
  slope1.retard.on(SegmentId::S2) = PolynomialFn{{-1.0, 1.0}};
  slope1.retard.on(SegmentId::S3) = PolynomialFn{{-2.0, 1.0}};
  const int N = 7;
  const double m = N + 0.25;
  const double closed =
      (std::sin(m * 1.0) + std::sin(m * 1.0) + std::sin(m * (kPi - 2.0))) / m;
  CHECK(q_delay_integral(slope1, N) == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("refined parameter prediction") {
  const AsymptoticEigen a2 = mu_refined(tt::zero_problem(), 2);
  CHECK(a2.mu_eq35 == 2.25);
  CHECK(a2.bracket == doctest::Approx(2.0));
  CHECK(a2.mu_eq47 == doctest::Approx(2.25 - 4.0 / (9.0 * kPi)).epsilon(1e-12));

  const AsymptoticEigen a3 = mu_refined(tt::zero_problem(), 3);
  CHECK(a3.mu_eq47 == doctest::Approx(3.25 - 4.0 / (13.0 * kPi)).epsilon(1e-12));

  const AsymptoticEigen c2 = mu_refined(tt::const_q_problem(1.0), 2);
  CHECK(c2.Q_N == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(c2.mu_eq47 ==
        doctest::Approx(2.25 - 2.0 * (2.0 + kPi) / (9.0 * kPi)).epsilon(1e-10));
  CHECK(c2.mu_eq47 == doctest::Approx(1.88633).epsilon(1e-5));

  // Consistency with the invariant linking the fields.
  CHECK(c2.mu_eq47 ==
        doctest::Approx(2.0 + 0.25 - 2.0 * c2.bracket / (kPi * 9.0)));
}

TEST_CASE("refined prediction converges cubically to the free roots") {
  const ProblemSpec spec = tt::zero_problem();
  double prev = 1e100;
  for (int N = 3; N <= 40; ++N) {
    const double pred = mu_refined(spec, N).mu_eq47;
    const double exact = tt::zero_q_char_root(N);
    const double scaled = double(N) * double(N) * std::abs(pred - exact);
    CHECK(scaled < prev);
    prev = scaled;
  }
}

TEST_CASE("first-order eigenfunction shape") {
  const ProblemSpec spec = tt::zero_problem(2.0, 3.0);
  CHECK(eigenfunction_first_order(spec, 5.25, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eigenfunction_first_order(spec, 5.25, 0.0, SegmentId::S3) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(eigenfunction_first_order(spec, 1.0, kPi / 4.0, SegmentId::S1) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // Dispatch: x in s2 picks the 1/delta prefactor.
  CHECK(eigenfunction_first_order(spec, 2.0, 1.5) ==
        doctest::Approx(std::sqrt(2.0) / 2.0 * std::cos(kPi / 4.0 + 3.0)));
}

TEST_CASE("refined eigenfunction structure") {
  SUBCASE("value one at the origin, exactly") {
    for (const ProblemSpec& spec :
         {tt::zero_problem(), tt::cos_q_half_retard_problem(2.0, 3.0)}) {
      CHECK(eigenfunction_refined(spec, 5, 0.0) == 1.0);
    }
  }
  SUBCASE("free-problem closed form") {
    const ProblemSpec spec = tt::zero_problem(2.0, 3.0);
    for (int N : {2, 5}) {
      const double m = N + 0.25;
      const double b = 4.0 / (kPi * (4.0 * N + 1.0));
      for (double x : {0.1, 0.9, 1.7, 2.9}) {
        const double closed = std::cos(m * x) * (1.0 + b * x) -
                              std::sin(m * x) * (1.0 - b * x);
        const double pref = segment_prefactor(spec, segment_of(spec.partition(), x,
                                                               Side::Right));
        CHECK(eigenfunction_refined(spec, N, x) ==
              doctest::Approx(pref * closed).epsilon(1e-13));
      }
    }
  }
  SUBCASE("prefactor structure across segments") {
    const ProblemSpec spec = tt::cos_q_half_retard_problem(2.0, 3.0);
    for (double x : {0.4, 1.3, 2.8}) {
      const double s1 = eigenfunction_refined(spec, 6, x, SegmentId::S1);
      const double s2 = eigenfunction_refined(spec, 6, x, SegmentId::S2);
      const double s3 = eigenfunction_refined(spec, 6, x, SegmentId::S3);
      CHECK(s2 == doctest::Approx(s1 / 2.0).epsilon(1e-14));
      CHECK(s3 == doctest::Approx(s1 / 6.0).epsilon(1e-14));
    }
  }
  SUBCASE("grid evaluation agrees with pointwise evaluation") {
    const ProblemSpec spec = tt::cos_q_half_retard_problem(2.0, 3.0);
    std::vector<double> xs;
    for (int j = 0; j <= 40; ++j) xs.push_back(kPi * j / 40.0);
    const std::vector<double> grid = eigenfunction_refined_grid(spec, 6, xs);
    for (std::size_t j = 0; j < xs.size(); ++j)
      CHECK(grid[j] ==
            doctest::Approx(eigenfunction_refined(spec, 6, xs[j])).epsilon(2e-8));
  }
}

TEST_CASE("eigenfunction error shrinks with N") {
  const ProblemSpec spec = tt::cos_q_half_retard_problem(2.0, 3.0);
  double prevE = 1e100, prevC = 0.0;
  for (int N : {6, 12}) {
    const FindResult res = find_eigen_near(spec, N);
    REQUIRE(res.status == FindStatus::Ok);
    const EigenfunctionSample smp =
        make_eigenfunction_sample(spec, N, res.record.mu_num, 256);
    double supR = 0.0, supF = 0.0;
    for (std::size_t j = 0; j < smp.grid.size(); ++j) {
      supR = std::max(supR, std::abs(smp.u_asym[j] - smp.w_num[j]));
      supF = std::max(supF, std::abs(smp.u_first[j] - smp.w_num[j]));
    }
    std::cout << "[calibration] efun N=" << N << " sup_refined=" << supR
              << " sup_first=" << supF << " C=" << res.record.mu_num * supF
              << "\n";
    CHECK(supR < prevE);
    prevE = supR;
    prevC = res.record.mu_num * supF;
  }
  CHECK(prevC > 0.0);
}

TEST_CASE("oscillatory decay audit") {
  SUBCASE("zero potential") {
    const DecayReport rep = check_oscillatory_decay(tt::zero_problem(), {5.0, 10.0});
    CHECK(rep.max_mu_abs == doctest::Approx(0.0));
    CHECK(!rep.advisory);
  }
  SUBCASE("unit potential closed form") {
    const DecayReport rep =
        check_oscillatory_decay(tt::const_q_problem(1.0), {10.0, 20.0, 40.0, 80.0});
    for (const auto& row : rep.rows) {
      const double exact_cos = std::sin(2.0 * row.mu * kPi) / (2.0 * row.mu);
      const double exact_sin =
          (1.0 - std::cos(2.0 * row.mu * kPi)) / (2.0 * row.mu);
      CHECK(row.integral_cos == doctest::Approx(exact_cos).epsilon(1e-9));
      CHECK(row.integral_sin == doctest::Approx(exact_sin).epsilon(1e-9));
      CHECK(row.mu_abs_cos <= 0.5 + 1e-9);
    }
  }
  SUBCASE("retarded phase stays bounded") {
    const DecayReport rep = check_oscillatory_decay(tt::cos_q_half_retard_problem(),
                                             {10.0, 20.0, 40.0, 80.0});
    for (const auto& row : rep.rows)
      std::cout << "[calibration] decay mu=" << row.mu
                << " mu|Ic|=" << row.mu_abs_cos << " mu|Is|=" << row.mu_abs_sin
                << "\n";
    CHECK(!rep.advisory);
    const double early = std::max({rep.rows[0].mu_abs_cos, rep.rows[0].mu_abs_sin,
                                   rep.rows[1].mu_abs_cos, rep.rows[1].mu_abs_sin});
    const double late = std::max({rep.rows[2].mu_abs_cos, rep.rows[2].mu_abs_sin,
                                  rep.rows[3].mu_abs_cos, rep.rows[3].mu_abs_sin});
    CHECK(late <= 1.25 * early);
  }
  SUBCASE("advisory flag follows the smoothness gate") {
    ProblemSpec rough = tt::zero_problem();
    rough.retard.on(SegmentId::S1) = PolynomialFn{{0.0, 2.0}};  // slope 2
    const DecayReport rep = check_oscillatory_decay(rough, {5.0});
    CHECK(rep.advisory);
  }
}

TEST_CASE("eigenfunction sample assembly") {
  const ProblemSpec spec = tt::zero_problem();
  const double mu5 = tt::zero_q_char_root(5);
  const EigenfunctionSample smp = make_eigenfunction_sample(spec, 5, mu5, 64);
  REQUIRE(smp.grid.size() == 64);
  CHECK(smp.grid.front() == 0.0);
  CHECK(smp.grid.back() == kPi);
  CHECK(smp.w_num[0] == 1.0);
  CHECK(smp.u_asym[0] == 1.0);
  CHECK(smp.u_first[0] == doctest::Approx(1.0).epsilon(1e-15));
  double sup = 0.0;
  for (std::size_t j = 0; j < smp.grid.size(); ++j)
    sup = std::max(sup, std::abs(smp.u_first[j] - smp.w_num[j]));
  CHECK(sup <= 2.0 / mu5);  // first-order error scale
}
