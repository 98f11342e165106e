/**
 * @file polarization.hpp
 * @brief Two-level polarization amplitudes with an explicit loss ledger.
 *
 * A single photon's polarization is a complex 2-vector in the fixed basis
 * (|H>, |V>), H at index 0 and V at index 1. Every operation that removes
 * probability from the state deposits it into a LossLedger so that
 *
 *     |a_H|^2 + |a_V|^2 + p_object + p_dl + p_component == 1
 *
 * holds along any sequence of operations.
 */
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "cgi/errors.hpp"

namespace cgi {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Jones vector (a_H, a_V).
template <typename Scalar>
using PolarizationAmplitude = Eigen::Matrix<Complex<Scalar>, 2, 1>;

template <typename Scalar>
using JonesMatrix = Eigen::Matrix<Complex<Scalar>, 2, 2>;

enum class Component { H = 0, V = 1 };

enum class LossSink { Object, Dl, Component };

template <typename Scalar>
constexpr Scalar kExactTolerance = Scalar(1e-12);

template <typename Scalar>
PolarizationAmplitude<Scalar> horizontal() {
    return PolarizationAmplitude<Scalar>(Complex<Scalar>(1), Complex<Scalar>(0));
}

template <typename Scalar>
PolarizationAmplitude<Scalar> vertical() {
    return PolarizationAmplitude<Scalar>(Complex<Scalar>(0), Complex<Scalar>(1));
}

template <typename Scalar>
Scalar probability(const PolarizationAmplitude<Scalar>& state) {
    return state.squaredNorm();
}

/// Probability removed from a photon, split by where it went.
template <typename Scalar>
struct LossLedger {
    Scalar p_object{0};
    Scalar p_dl{0};
    Scalar p_component{0};

    Scalar total() const { return p_object + p_dl + p_component; }

    Scalar& operator[](LossSink sink) {
        switch (sink) {
        case LossSink::Object: return p_object;
        case LossSink::Dl: return p_dl;
        case LossSink::Component: return p_component;
        }
        return p_component;
    }
};

/// Conservation residual |psi|^2 + ledger - 1.
template <typename Scalar>
Scalar conservation_residual(const PolarizationAmplitude<Scalar>& state, const LossLedger<Scalar>& ledger) {
    return probability(state) + ledger.total() - Scalar(1);
}

/// Complex amplitude transmittance of an object pixel, |t| <= 1.
/// t = 0 is an opaque blocker, t = 1 an open channel, |t| = 1 a pure phase object.
template <typename Scalar>
class Transmittance {
public:
    Transmittance() = default;

    Transmittance(Complex<Scalar> t) : t_(t) { // NOLINT: implicit by intent
        if (!std::isfinite(t.real()) || !std::isfinite(t.imag()))
            throw InvalidParameter("transmittance must be finite");
        if (std::abs(t) > Scalar(1) + kExactTolerance<Scalar>)
            throw InvalidParameter("transmittance magnitude exceeds 1");
    }

    Transmittance(Scalar t) : Transmittance(Complex<Scalar>(t)) {} // NOLINT

    static Transmittance blocked() { return Transmittance(Complex<Scalar>(0)); }
    static Transmittance open() { return Transmittance(Complex<Scalar>(1)); }
    static Transmittance polar(Scalar magnitude, Scalar phase) {
        return Transmittance(std::polar(magnitude, phase));
    }

    Complex<Scalar> value() const { return t_; }
    Scalar magnitude() const { return std::abs(t_); }
    Scalar intensity() const { return std::norm(t_); }

private:
    Complex<Scalar> t_{1};
};

/// R_y(theta) = exp(-i theta sigma_y / 2) in the (H, V) basis.
template <typename Scalar>
JonesMatrix<Scalar> rotation_matrix(Scalar theta) {
    if (!std::isfinite(theta))
        throw InvalidParameter("rotation angle must be finite");
    const Scalar c = std::cos(theta / 2);
    const Scalar s = std::sin(theta / 2);
    JonesMatrix<Scalar> r;
    r << c, -s,
         s, c;
    return r;
}

template <typename Scalar>
PolarizationAmplitude<Scalar> rotate(const PolarizationAmplitude<Scalar>& state, Scalar theta) {
    return rotation_matrix(theta) * state;
}

/// Multiplies one component by `factor` and books the removed probability
/// (1 - |factor|^2) |component|^2 to `sink`.
template <typename Scalar>
void attenuate_component(PolarizationAmplitude<Scalar>& state, Component which, Complex<Scalar> factor,
                         LossLedger<Scalar>& ledger, LossSink sink) {
    const Scalar gain = std::norm(factor);
    if (!std::isfinite(gain) || gain > Scalar(1) + kExactTolerance<Scalar>)
        throw InvalidParameter("attenuation factor magnitude exceeds 1");
    auto& amp = state(static_cast<int>(which));
    // unit-modulus factors (phase objects) remove nothing
    const Scalar deficit = Scalar(1) - gain;
    if (deficit > 8 * std::numeric_limits<Scalar>::epsilon())
        ledger[sink] += deficit * std::norm(amp);
    amp *= factor;
}

/// Value-returning form of attenuate_component.
template <typename Scalar>
PolarizationAmplitude<Scalar> attenuated(PolarizationAmplitude<Scalar> state, Component which,
                                         Complex<Scalar> factor, LossLedger<Scalar>& ledger, LossSink sink) {
    attenuate_component(state, which, factor, ledger, sink);
    return state;
}

/// Uniform loss of probability `loss` on both components, booked to `sink`.
template <typename Scalar>
void attenuate_both(PolarizationAmplitude<Scalar>& state, Scalar loss, LossLedger<Scalar>& ledger,
                    LossSink sink) {
    if (loss == Scalar(0))
        return;
    if (!(loss >= Scalar(0) && loss <= Scalar(1)))
        throw InvalidParameter("loss probability must lie in [0, 1]");
    ledger[sink] += loss * probability(state);
    state *= std::sqrt(Scalar(1) - loss);
}

} // namespace cgi
