#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "scatter/amplitudes.hpp"
#include "scatter/error.hpp"
#include "scatter/harmonic_balance.hpp"
#include "scatter/oracle.hpp"
#include "scatter/time_domain.hpp"
#include "scatter/tridiag.hpp"

using namespace scatter;

namespace {

const cplx I{0.0, 1.0};

TridiagonalSystem random_system(std::size_t n, unsigned seed, double diag_scale) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto z = [&] { return cplx(u(rng), u(rng)); };
    TridiagonalSystem s;
    for (std::size_t k = 0; k < n; ++k) {
        s.diag.push_back(diag_scale * z());
        s.rhs.push_back(z());
        if (k + 1 < n) {
            s.sub.push_back(z());
            s.super.push_back(z());
        }
    }
    return s;
}

}  // namespace

TEST(Tridiagonal, SmallSizes) {
    TridiagonalSystem one{{}, {cplx(2.0, 1.0)}, {}, {cplx(4.0, 2.0)}};
    EXPECT_EQ(solve_tridiagonal(one)[0], cplx(2.0, 0.0));
    for (std::size_t n : {2u, 3u, 4u}) {
        const auto s = random_system(n, 7u + static_cast<unsigned>(n), 3.0);
        EXPECT_LT(relative_residual(s, solve_tridiagonal(s)), 1e-14);
    }
}

TEST(Tridiagonal, PivotsOnWeakDiagonal) {
    // normwise backward error ||Ax - b|| / (||A|| ||x|| + ||b||)
    for (unsigned seed = 1; seed <= 20; ++seed) {
        const auto s = random_system(129, seed, 1e-3);
        const auto x = solve_tridiagonal(s);
        const auto ax = s.apply(x);
        double res = 0.0, xn = 0.0, bn = 0.0, an = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            res = std::max(res, std::abs(ax[k] - s.rhs[k]));
            xn = std::max(xn, std::abs(x[k]));
            bn = std::max(bn, std::abs(s.rhs[k]));
            double row = std::abs(s.diag[k]);
            if (k > 0) row += std::abs(s.sub[k - 1]);
            if (k + 1 < x.size()) row += std::abs(s.super[k]);
            an = std::max(an, row);
        }
        EXPECT_LT(res / (an * xn + bn), 1e-14) << "seed " << seed;
    }
    for (unsigned seed = 1; seed <= 20; ++seed) {
        const auto s = random_system(129, seed, 4.0);
        EXPECT_LT(relative_residual(s, solve_tridiagonal(s)), 1e-12) << "seed " << seed;
    }
    // zero leading pivot needs a row exchange
    TridiagonalSystem s{{1.0}, {0.0, 1.0}, {1.0}, {1.0, 2.0}};
    const auto x = solve_tridiagonal(s);
    EXPECT_NEAR(std::abs(x[0] - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(x[1] - 1.0), 0.0, 1e-15);
}

TEST(Tridiagonal, SingularThrows) {
    TridiagonalSystem s{{1.0}, {1.0, 1.0}, {1.0}, {1.0, 2.0}};
    try {
        solve_tridiagonal(s);
        FAIL();
    } catch (const ScatterError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::singular_system);
    }
}

TEST(HarmonicBalance, UnmodulatedSingleRow) {
    for (double d : {-5.0, -1.0, 0.0, 2.0}) {
        const auto e = harmonic_balance_solve(EmitterParams::in_gamma_units(0.0, 2.0), d, 4);
        EXPECT_LT(std::abs(e.at(0) - 1.0 / cplx(d, 1.0)), 1e-15);
        for (int n = 1; n <= 4; ++n) EXPECT_EQ(std::abs(e.at(n)) + std::abs(e.at(-n)), 0.0);
        const auto r = amplitudes_from_excitation(e, EmitterParams::in_gamma_units(0.0, 2.0));
        EXPECT_LT(std::abs(r.r(0) + I / cplx(d, 1.0)), 1e-15);
    }
}

TEST(HarmonicBalance, MatchesSeriesAndDenseOracle) {
    const auto p = EmitterParams::in_gamma_units(5.0, 2.0);
    const auto e = harmonic_balance_solve(p, 0.0, 64);
    const auto dense = oracle::harmonic_balance_dense(1.0, 0.0, 2.0, 5.0, 1.0, 64);
    const auto series = evaluate_sidebands(p, 0.0);
    const auto hb = amplitudes_from_excitation(e, p);
    for (int n = -20; n <= 20; ++n) {
        EXPECT_LT(std::abs(e.at(n) - dense[static_cast<std::size_t>(n + 64)]), 1e-13);
        EXPECT_LT(std::abs(hb.r(n) - series.r(n)), 1e-8);
    }
    EXPECT_LT(harmonic_balance_residual(build_harmonic_balance(p, 0.0, 64), e), 1e-12);
}

TEST(HarmonicBalance, ResidualSmallAcrossStandardGrid) {
    for (const auto [fo, w] : {std::pair{5.0, 2.0}, std::pair{5.0, 8.0}, std::pair{2.0, 2.0}, std::pair{8.0, 2.0}}) {
        const auto p = EmitterParams::in_gamma_units(fo, w);
        for (int k = 0; k <= 20; ++k) {
            const double d = -10.0 + k;
            const auto sys = build_harmonic_balance(p, d, 48);
            EXPECT_LT(harmonic_balance_residual(sys, harmonic_balance_solve(p, d, 48)), 1e-12);
        }
    }
}

TEST(HarmonicBalance, FirstSidebandLinearInDepth) {
    const auto at = [](double fo) {
        return std::abs(harmonic_balance_solve(EmitterParams::in_gamma_units(fo, 2.0), 0.3, 8).at(1));
    };
    const double a = at(1e-1), b = at(1e-2), c = at(1e-3);
    EXPECT_NEAR(std::log10(a / b), 1.0, 1e-2);
    EXPECT_NEAR(std::log10(b / c), 1.0, 1e-3);
    EXPECT_NEAR(std::abs(harmonic_balance_solve(EmitterParams::in_gamma_units(1e-3, 2.0), 0.3, 8).at(-1)) / c,
                std::abs(1.0 / cplx(0.3 - 2.0, 1.0)) / std::abs(1.0 / cplx(0.3 + 2.0, 1.0)), 1e-3);
}

TEST(HarmonicBalance, SpectralConvergence) {
    const auto p = EmitterParams::in_gamma_units(8.0, 2.0);
    const auto a = harmonic_balance_solve(p, 1.0, 20);
    const auto b = harmonic_balance_solve(p, 1.0, 40);
    for (int n = -20; n <= 20; ++n) EXPECT_LT(std::abs(a.at(n) - b.at(n)), 1e-10);
}

TEST(HarmonicBalance, Errors) {
    EXPECT_THROW(harmonic_balance_solve(EmitterParams::in_gamma_units(5.0, 0.0), 0.0, 8), ScatterError);
    EXPECT_THROW(harmonic_balance_solve(EmitterParams::in_gamma_units(5.0, 2.0), 0.0, 0), ScatterError);
    EmitterParams dark = EmitterParams::in_gamma_units(5.0, 2.0);
    dark.coupling = 0.0;
    for (const auto& c : harmonic_balance_solve(dark, 0.0, 8).coeffs) EXPECT_EQ(c, cplx{});
}

TEST(TimeDomain, DecoupledEmitterStaysEmpty) {
    EmitterParams p = EmitterParams::in_gamma_units(5.0, 2.0);
    p.coupling = 0.0;
    const auto tr = time_domain_excitation(p, 0.0, 10.0, 1e-3);
    for (const auto& s : tr.samples) EXPECT_EQ(s, cplx{});
}

TEST(TimeDomain, UnmodulatedRelaxation) {
    const auto p = EmitterParams::in_gamma_units(0.0, 0.0);
    const auto tr = time_domain_excitation(p, 0.0, 40.0, 1e-3);
    const cplx steady = 1.0 / cplx(0.0, 1.0);
    const double w0 = p.omega_a;
    for (std::size_t k = 0; k < tr.samples.size(); k += 97) {
        const double t = tr.time(k);
        const cplx rot = tr.samples[k] * std::polar(1.0, w0 * t);
        EXPECT_LE(std::abs(rot - steady), std::exp(-t) * std::abs(steady) * (1.0 + 1e-9) + 1e-12) << t;
    }
}

TEST(TimeDomain, StepAndWindowChecks) {
    const auto p = EmitterParams::in_gamma_units(5.0, 2.0);
    try {
        time_domain_excitation(p, 0.0, 100.0, 0.1);
        FAIL();
    } catch (const ScatterError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unstable_step);
    }
    EXPECT_THROW(time_domain_excitation(p, 0.0, 5.0, 1e-3), ScatterError);
}

TEST(TimeDomain, FourierExtractsPureTones) {
    TimeDomainTrace tr;
    tr.omega_0 = 3.0;
    tr.omega = 2.0;
    tr.gamma = 1.0;
    const double period = 2.0 * M_PI / tr.omega;
    const std::size_t per = 400;
    tr.dt = period / per;
    tr.window_start = 20.0 * period;
    tr.window_end = 30.0 * period;
    tr.horizon = tr.window_end;
    for (std::size_t k = 0; k <= 30 * per; ++k) {
        const double t = tr.time(k);
        tr.samples.push_back(std::exp(-I * 3.0 * t) + 0.3 * std::exp(-I * 5.0 * t));
    }
    const auto e = fourier_extract(tr, 3.0, 2.0, 4);
    EXPECT_LT(std::abs(e.at(0) - 1.0), 1e-10);
    EXPECT_LT(std::abs(e.at(1) - 0.3), 1e-10);
    for (int n : {-4, -3, -2, -1, 2, 3, 4}) EXPECT_LT(std::abs(e.at(n)), 1e-10);

    auto bad = tr;
    bad.window_end = 29.5 * period;
    try {
        fourier_extract(bad, 3.0, 2.0, 4);
        FAIL();
    } catch (const ScatterError& err) {
        EXPECT_EQ(err.kind(), ErrorKind::bad_window);
    }
    auto early = tr;
    early.window_start = 2.0 * period;
    EXPECT_THROW(fourier_extract(early, 3.0, 2.0, 4), ScatterError);
}

TEST(TimeDomain, ModulatedSteadyStateMatchesHarmonicBalance) {
    const auto p = EmitterParams::in_gamma_units(5.0, 2.0);
    const auto tr = time_domain_excitation(p, 0.0);
    EXPECT_LT(periodicity_defect(tr), 1e-6);
    const auto td = fourier_extract(tr, p.omega_a, p.mod_freq, 20);
    const auto hb = harmonic_balance_solve(p, 0.0, 40);
    for (int n = -20; n <= 20; ++n) EXPECT_LT(std::abs(td.at(n) - hb.at(n)), 1e-4) << n;
    for (const auto& s : tr.samples) EXPECT_LE(std::abs(s), 1.0 + 1e-12);
}

TEST(Oracle, AmplitudesFromExcitation) {
    const auto p = EmitterParams::in_gamma_units(0.0, 2.0);
    ExcitationSpectrum empty(p.omega_a, 2.0, 3);
    const auto s = amplitudes_from_excitation(empty, p);
    EXPECT_EQ(s.t(0), cplx(1.0, 0.0));
    EXPECT_EQ(s.total_R, 0.0);
}

TEST(Oracle, UnmodulatedGridAgreesEverywhere) {
    CrossValidateOptions o;
    o.tol_series_hb = 1e-10;
    o.tol_td = 1e-10;
    for (int d = -5; d <= 5; ++d) {
        const auto r = cross_validate(EmitterParams::in_gamma_units(0.0, 2.0), d, o);
        EXPECT_TRUE(r.pass) << "delta=" << d << " hb=" << r.series_vs_hb << " td=" << r.series_vs_td;
    }
}

TEST(Oracle, ModulatedCases) {
    for (const auto [fo, w, d] : {std::tuple{5.0, 2.0, 0.0}, std::tuple{5.0, 8.0, 5.0}, std::tuple{5.0, 2.0, 2.0}}) {
        const auto r = cross_validate(EmitterParams::in_gamma_units(fo, w), d);
        EXPECT_TRUE(r.hb_run);
        EXPECT_TRUE(r.time_domain_run);
        EXPECT_LT(r.series_vs_hb, 1e-8);
        EXPECT_LT(r.series_vs_td, 1e-3);
        EXPECT_LT(r.hb_residual, 1e-12);
        EXPECT_TRUE(r.pass);
    }
}

TEST(Oracle, FrozenEmitterSkipsHarmonicBalance) {
    const auto r = cross_validate(EmitterParams::in_gamma_units(5.0, 0.0), 5.0);
    EXPECT_FALSE(r.hb_run);
    EXPECT_TRUE(r.pass);
}
