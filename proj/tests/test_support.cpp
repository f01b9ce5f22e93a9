#include <doctest.h>

#include <numeric>

#include "lrp/lrp.hpp"
#include "lrp/parallel.hpp"

using namespace lrp;

TEST_SUITE("support") {
  TEST_CASE("wilson interval") {
    const auto ci = wilson_interval(5, 10);
    CHECK(ci.lo == doctest::Approx(0.236593).epsilon(1e-5));
    CHECK(ci.hi == doctest::Approx(0.763407).epsilon(1e-5));
    const auto all = wilson_interval(20, 20);
    CHECK(all.hi == 1.0);
    CHECK(all.lo == doctest::Approx(0.838875).epsilon(1e-5));
  }

  TEST_CASE("mean and compensated sum") {
    const std::vector<double> xs{1e16, 1.0, -1e16, 1.0};
    CHECK(compensated_sum(xs) == 2.0);
    const std::vector<double> ys{1, 2, 3, 4};
    const auto m = mean_stat(ys);
    CHECK(m.mean == 2.5);
    CHECK(m.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(m.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0) / 2));
  }

  TEST_CASE("line fit recovers an exact line") {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
  }

  TEST_CASE("stream rng is a pure function of its key") {
    StreamRng a(3, Stream::walker, 9), b(3, Stream::walker, 9), c(3, Stream::walker, 10), d(3, Stream::replicate, 9);
    for (int i = 0; i < 100; ++i) {
      const auto x = a();
      CHECK(x == b());
      CHECK(x != c());
      CHECK(x != d());
    }
    CHECK(derive_seed(1, Stream::instance, 2, 3) == derive_seed(1, Stream::instance, 2, 3));
    CHECK(derive_seed(1, Stream::instance, 2, 3) != derive_seed(1, Stream::instance, 3, 2));
  }

  TEST_CASE("parallel_for slots and errors") {
    std::vector<std::uint64_t> one(1000), four(1000);
    parallel_for(1000, 1, [&](std::int64_t i) { one[i] = StreamRng(1, Stream::walker, i)(); });
    parallel_for(1000, 4, [&](std::int64_t i) { four[i] = StreamRng(1, Stream::walker, i)(); });
    CHECK(one == four);
    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [](std::int64_t i) {
                                   if (i == 37) fail(ErrorKind::convergence, "boom");
                                 }),
                    Error);
  }

  TEST_CASE("verify suite names") {
    CHECK(verify_suite_names().size() == 6);
    try {
      run_verify_suite("nope");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_argument);
    }
  }
}
