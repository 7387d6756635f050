#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "jointvol/black_scholes.hpp"
#include "oracles.hpp"

using jointvol::BsInputs;
using jointvol::OptionKind;

TEST_CASE("norm_cdf basic values", "[bs]") {
    CHECK(jointvol::norm_cdf(0.0) == 0.5);
    CHECK(jointvol::norm_cdf(40.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(jointvol::norm_cdf(-40.0) == Catch::Approx(0.0).margin(1e-15));
    // frozen from the quadrature oracle below
    CHECK(jointvol::norm_cdf(1.96) ==
          Catch::Approx(0.97500210485177957).margin(1e-14));
    CHECK_THROWS_AS(jointvol::norm_cdf(std::nan("")), std::domain_error);
}

TEST_CASE("norm_cdf against quadrature oracle", "[bs][oracle]") {
    for (double z : {-6.0, -3.2, -1.0, -0.1, 0.3, 0.5, 1.0, 1.96, 2.5, 4.0, 7.5}) {
        CAPTURE(z);
        CHECK(jointvol::norm_cdf(z) ==
              Catch::Approx(oracles::quad_norm_cdf(z)).margin(1e-14));
    }
}

TEST_CASE("norm_cdf symmetry and monotonicity", "[bs][property]") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> dz(-8.0, 8.0);
    double prev_z = -1e9, prev_p = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double z = dz(rng);
        CHECK(std::abs(jointvol::norm_cdf(z) + jointvol::norm_cdf(-z) - 1.0) <= 1e-14);
        const double p = jointvol::norm_cdf(z);
        if (z > prev_z) {
            // collected pairs are unordered; just check against the stored one
            if (prev_z > -1e8) CHECK((z - prev_z) * (p - prev_p) >= 0.0);
        }
        prev_z = z;
        prev_p = p;
    }
}

TEST_CASE("d_pair values", "[bs]") {
    SECTION("log-moneyness zero") {
        const auto d = jointvol::d_pair({1.0, 1.0, 1.0, 0.2, 0.0});
        CHECK(d.d_plus == Catch::Approx(0.1).margin(1e-15));
        CHECK(d.d_minus == Catch::Approx(-0.1).margin(1e-15));
    }
    SECTION("direct arithmetic") {
        const auto d = jointvol::d_pair({1.0, 1.0, 1.0, 0.3, 0.1});
        CHECK(d.d_plus == Catch::Approx(0.1 / 0.3 + 0.15).epsilon(1e-15));
        CHECK(d.d_minus == Catch::Approx(0.1 / 0.3 - 0.15).epsilon(1e-14));
    }
    SECTION("re-evaluated at higher precision") {
        const auto d = jointvol::d_pair({1.0, 1.28, 1.0, 0.5, 0.09});
        CHECK(d.d_plus == Catch::Approx(-0.063720155863051596).margin(1e-15));
        CHECK(d.d_minus == Catch::Approx(-0.563720155863051596).margin(1e-15));
    }
    SECTION("degenerate inputs rejected") {
        CHECK_THROWS_AS(jointvol::d_pair({1.0, 1.0, 0.0, 0.2, 0.0}),
                        jointvol::DegenerateInputs);
        CHECK_THROWS_AS(jointvol::d_pair({1.0, 1.0, 1.0, 0.0, 0.0}),
                        jointvol::DegenerateInputs);
    }
}

TEST_CASE("bs_price pinned values", "[bs]") {
    SECTION("worthless strike limit") {
        CHECK(jointvol::bs_price(OptionKind::Call, {1.0, 1e-12, 1.0, 0.2, 0.05}) ==
              Catch::Approx(1.0).margin(1e-9));
    }
    SECTION("sigma -> 0 deterministic forward") {
        CHECK(jointvol::bs_price(OptionKind::Call, {1.0, 0.9, 1.0, 0.0, 0.05}) ==
              Catch::Approx(0.14389351794935739).margin(1e-15));
    }
    SECTION("frozen lognormal-integration value") {
        CHECK(jointvol::bs_price(OptionKind::Call, {1.0, 1.0, 1.0, 0.2, 0.05}) ==
              Catch::Approx(0.10450583572185567).margin(1e-12));
    }
    SECTION("tau = 0 intrinsic") {
        CHECK(jointvol::bs_price(OptionKind::Call, {1.2, 1.0, 0.0, 0.2, 0.05}) ==
              Catch::Approx(0.2).margin(1e-15));
        CHECK(jointvol::bs_price(OptionKind::Put, {1.2, 1.0, 0.0, 0.2, 0.05}) == 0.0);
    }
    SECTION("domain violations") {
        CHECK_THROWS_AS(jointvol::bs_price(OptionKind::Call, {-1.0, 1.0, 1.0, 0.2, 0.0}),
                        jointvol::DegenerateInputs);
        CHECK_THROWS_AS(jointvol::bs_price(OptionKind::Call, {1.0, 1.0, 1.0, -0.2, 0.0}),
                        jointvol::DegenerateInputs);
    }
}

TEST_CASE("bs_price against lognormal quadrature oracle", "[bs][oracle]") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dsig(0.05, 2.0), drho(-0.2, 0.5),
        dk(0.3, 3.0), dtau(0.05, 5.0);
    for (int i = 0; i < 200; ++i) {
        const BsInputs in{1.0, dk(rng), dtau(rng), dsig(rng), drho(rng)};
        CAPTURE(in.strike, in.tau, in.sigma, in.rho);
        for (OptionKind kind : {OptionKind::Call, OptionKind::Put}) {
            const double lib = jointvol::bs_price(kind, in);
            const double quad = oracles::quad_bs_price(kind, in.spot, in.strike,
                                                       in.tau, in.sigma, in.rho);
            CHECK(lib == Catch::Approx(quad).margin(1e-10));
        }
    }
}

TEST_CASE("put-call parity, bounds, monotonicity, homogeneity", "[bs][property]") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> dsig(0.05, 2.0), drho(-0.2, 0.5),
        dk(0.3, 3.0), dtau(0.05, 5.0), dlam(0.1, 10.0);
    for (int i = 0; i < 500; ++i) {
        const double k = dk(rng), tau = dtau(rng), sig = dsig(rng), rho = drho(rng);
        const BsInputs in{1.0, k, tau, sig, rho};
        const double call = jointvol::bs_price(OptionKind::Call, in);
        const double put = jointvol::bs_price(OptionKind::Put, in);
        const double bond = k * std::exp(-rho * tau);
        CAPTURE(k, tau, sig, rho);

        CHECK(std::abs(put - (call - 1.0 + bond)) <= 1e-12);
        CHECK(call >= std::max(0.0, 1.0 - bond) - 1e-12);
        CHECK(call <= 1.0 + 1e-12);
        CHECK(put >= std::max(0.0, bond - 1.0) - 1e-12);
        CHECK(put <= bond + 1e-12);

        // strict monotonicity at finite spacing
        const double dk_step = 1e-3;
        CHECK(jointvol::bs_price(OptionKind::Call, {1.0, k + dk_step, tau, sig, rho}) <
              call);
        CHECK(jointvol::bs_price(OptionKind::Put, {1.0, k + dk_step, tau, sig, rho}) >
              put);
        CHECK(jointvol::bs_price(OptionKind::Call, {1.0, k, tau, sig + 1e-3, rho}) >
              call);
        CHECK(jointvol::bs_price(OptionKind::Call, {1.0, k, tau, sig, rho + 1e-3}) >
              call);

        const double lam = dlam(rng);
        const double scaled =
            jointvol::bs_price(OptionKind::Call, {lam, lam * k, tau, sig, rho});
        CHECK(scaled == Catch::Approx(lam * call).epsilon(1e-12).margin(1e-14));
    }
}

TEST_CASE("vega", "[bs]") {
    SECTION("frozen value phi(0.1)") {
        CHECK(jointvol::vega({1.0, 1.0, 1.0, 0.2, 0.0}) ==
              Catch::Approx(0.39695254747701177).margin(1e-12));
    }
    SECTION("vanishing time value") {
        CHECK(jointvol::vega({1.0, 1.0, 1e-10, 0.2, 0.0}) < 1e-4);
    }
    SECTION("density tail") {
        CHECK(jointvol::vega({1.0, 100.0, 1.0, 0.2, 0.0}) < 1e-12);
    }
    SECTION("degenerate") {
        CHECK_THROWS_AS(jointvol::vega({1.0, 1.0, 0.0, 0.2, 0.0}),
                        jointvol::DegenerateInputs);
    }
}

TEST_CASE("vega matches central finite difference", "[bs][property]") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> dsig(0.05, 2.0), drho(-0.2, 0.5),
        dk(0.5, 2.0), dtau(0.1, 5.0);
    const double h = 1e-6;
    for (int i = 0; i < 300; ++i) {
        const BsInputs in{1.0, dk(rng), dtau(rng), dsig(rng), drho(rng)};
        const double up = jointvol::bs_price(OptionKind::Call,
                                             {in.spot, in.strike, in.tau, in.sigma + h, in.rho});
        const double dn = jointvol::bs_price(OptionKind::Call,
                                             {in.spot, in.strike, in.tau, in.sigma - h, in.rho});
        const double fd = (up - dn) / (2.0 * h);
        CAPTURE(in.strike, in.tau, in.sigma, in.rho);
        CHECK(jointvol::vega(in) == Catch::Approx(fd).margin(1e-6));
        CHECK(jointvol::vega(in) > 0.0);
    }
}

TEST_CASE("normalized_price", "[bs]") {
    SECTION("definition at kappa = 1") {
        CHECK(jointvol::normalized_price(OptionKind::Call, 1.0, 1.0, 0.2, 0.05) ==
              jointvol::bs_price(OptionKind::Call, {1.0, 1.0, 1.0, 0.2, 0.05}));
    }
    SECTION("homogeneity at S = 2.5") {
        const double direct =
            jointvol::bs_price(OptionKind::Call, {2.5, 2.75, 1.0, 0.3, 0.05});
        const double scaled =
            2.5 * jointvol::normalized_price(OptionKind::Call, 1.1, 1.0, 0.3, 0.05);
        CHECK(direct == Catch::Approx(scaled).margin(1e-12));
    }
    SECTION("frozen oracle value") {
        CHECK(jointvol::normalized_price(OptionKind::Call, 1.28, 1.0, 0.5, 0.09) ==
              Catch::Approx(0.13947208896995290).margin(1e-12));
        CHECK(jointvol::normalized_price(OptionKind::Call, 1.28, 1.0, 0.5, 0.09) ==
              Catch::Approx(oracles::quad_bs_price(OptionKind::Call, 1.0, 1.28, 1.0,
                                                   0.5, 0.09))
                  .margin(1e-10));
    }
}
