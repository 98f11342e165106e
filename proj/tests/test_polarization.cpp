#include "cgi/polarization.hpp"

#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

using namespace cgi;
using Amp = PolarizationAmplitude<double>;
using Ledger = LossLedger<double>;

namespace {

constexpr double kTol = 1e-12;
constexpr double kPi = std::numbers::pi;

Amp amp(std::complex<double> h, std::complex<double> v) { return Amp(h, v); }

} // namespace

TEST(Rotate, IdentityAtZero) {
    const Amp out = rotate(horizontal<double>(), 0.0);
    EXPECT_NEAR(std::abs(out(0) - 1.0), 0.0, kTol);
    EXPECT_NEAR(std::abs(out(1)), 0.0, kTol);
}

TEST(Rotate, PiTakesHToV) {
    const Amp out = rotate(horizontal<double>(), kPi);
    EXPECT_NEAR(std::abs(out(0)), 0.0, kTol);
    EXPECT_NEAR(out(1).real(), 1.0, kTol);
}

TEST(Rotate, HalfPiIsEqualSuperposition) {
    const Amp out = rotate(horizontal<double>(), kPi / 2);
    EXPECT_NEAR(out(0).real(), 0.7071068, 1e-7);
    EXPECT_NEAR(out(1).real(), 0.7071068, 1e-7);
}

TEST(Rotate, MatchesComponentFormula) {
    const Amp in = amp({0.3, 0.1}, {-0.2, 0.6});
    const double theta = 0.83;
    const Amp out = rotate(in, theta);
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    EXPECT_NEAR(std::abs(out(0) - (in(0) * c - in(1) * s)), 0.0, kTol);
    EXPECT_NEAR(std::abs(out(1) - (in(0) * s + in(1) * c)), 0.0, kTol);
}

TEST(Rotate, RejectsNonFiniteAngle) {
    EXPECT_THROW(rotate(horizontal<double>(), std::nan("")), InvalidParameter);
    EXPECT_THROW(rotate(horizontal<double>(), std::numeric_limits<double>::infinity()), InvalidParameter);
}

TEST(Rotate, GroupPropertyAndNorm) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-10, 10), re(-1, 1);
    for (int trial = 0; trial < 500; ++trial) {
        Amp s = amp({re(rng), re(rng)}, {re(rng), re(rng)});
        s /= s.norm();
        const double a = ang(rng), b = ang(rng);
        const Amp lhs = rotate(rotate(s, a), b);
        const Amp rhs = rotate(s, a + b);
        EXPECT_LT((lhs - rhs).norm(), kTol);
        EXPECT_NEAR(probability(lhs), 1.0, kTol);
    }
}

TEST(Rotate, LongDoubleInstantiation) {
    const auto out = rotate(horizontal<long double>(), std::numbers::pi_v<long double>);
    EXPECT_NEAR(static_cast<double>(std::abs(out(1))), 1.0, 1e-15);
}

TEST(Attenuate, FullBlockMovesAllToSink) {
    Ledger ledger;
    const Amp out = attenuated(vertical<double>(), Component::V, {0, 0}, ledger, LossSink::Object);
    EXPECT_EQ(out.norm(), 0.0);
    EXPECT_NEAR(ledger.p_object, 1.0, kTol);
    EXPECT_EQ(ledger.p_dl, 0.0);
}

TEST(Attenuate, OpenChannelIsNoOp) {
    Ledger ledger;
    const Amp in = amp(0.6, 0.8);
    const Amp out = attenuated(in, Component::H, {1, 0}, ledger, LossSink::Object);
    EXPECT_EQ(out, in);
    EXPECT_EQ(ledger.total(), 0.0);
}

TEST(Attenuate, PartialFactorBooksDeficit) {
    Ledger ledger;
    const Amp out = attenuated(vertical<double>(), Component::V, {0.5, 0}, ledger, LossSink::Object);
    EXPECT_NEAR(out(1).real(), 0.5, kTol);
    EXPECT_NEAR(ledger.p_object, 0.75, kTol);
    EXPECT_NEAR(conservation_residual(out, ledger), 0.0, kTol);
}

TEST(Attenuate, RejectsGain) {
    Ledger ledger;
    Amp s = vertical<double>();
    EXPECT_THROW(attenuate_component(s, Component::V, {1.1, 0}, ledger, LossSink::Object), InvalidParameter);
    EXPECT_THROW(attenuate_component(s, Component::V, {0.8, 0.8}, ledger, LossSink::Object), InvalidParameter);
}

TEST(Attenuate, UnitModulusLosesNothing) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    for (int trial = 0; trial < 200; ++trial) {
        Ledger ledger;
        const Amp in = amp(0.6, {0, 0.8});
        const Amp out = attenuated(in, Component::H, std::polar(1.0, phase(rng)), ledger, LossSink::Object);
        EXPECT_EQ(ledger.total(), 0.0);
        EXPECT_NEAR(std::norm(out(0)), 0.36, kTol);
    }
}

TEST(Attenuate, ConservationOverRandomSequences) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    const LossSink sinks[] = {LossSink::Object, LossSink::Dl, LossSink::Component};
    for (int trial = 0; trial < 200; ++trial) {
        Amp s = horizontal<double>();
        Ledger ledger;
        for (int step = 0; step < 60; ++step) {
            if (u(rng) < 0.5) {
                s = rotate(s, 6.0 * u(rng));
            } else {
                const auto which = u(rng) < 0.5 ? Component::H : Component::V;
                const auto factor = std::polar(u(rng), 6.0 * u(rng));
                attenuate_component(s, which, factor, ledger, sinks[step % 3]);
            }
        }
        EXPECT_NEAR(conservation_residual(s, ledger), 0.0, kTol);
        EXPECT_GE(ledger.p_object, 0.0);
        EXPECT_LE(ledger.total(), 1.0 + kTol);
    }
}

TEST(Transmittance, Validation) {
    EXPECT_NO_THROW(Transmittance<double>(std::polar(1.0, 2.0)));
    EXPECT_THROW(Transmittance<double>(1.5), InvalidParameter);
    EXPECT_THROW(Transmittance<double>(std::complex<double>(NAN, 0)), InvalidParameter);
    EXPECT_EQ(Transmittance<double>::blocked().intensity(), 0.0);
    EXPECT_EQ(Transmittance<double>::open().intensity(), 1.0);
}

TEST(AttenuateBoth, ScalesBothComponents) {
    Ledger ledger;
    Amp s = amp(0.6, 0.8);
    attenuate_both(s, 0.19, ledger, LossSink::Component);
    EXPECT_NEAR(ledger.p_component, 0.19, kTol);
    EXPECT_NEAR(s(0).real(), 0.6 * 0.9, kTol);
    EXPECT_THROW(attenuate_both(s, 1.5, ledger, LossSink::Component), InvalidParameter);
}
