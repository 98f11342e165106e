/**
 * @file zeno.hpp
 * @brief Nested chained-Zeno interferometer: M outer cycles, N inner cycles each.
 *
 * The photon starts as |H>. Each outer cycle rotates the polarization by the
 * outer angle, sends the V component through N inner cycles that interrogate
 * the object, and recombines it with the H component, which bypasses the
 * object on the outer arm. After M outer cycles H goes to D0 and V to D1.
 *
 * Inner-cycle order is absorb-then-rotate: the H component crosses the object
 * (multiplied by t), then the inner half-wave plate rotates the pair. The H
 * left over after the N-th rotation is split off to the loss detector DL.
 * With t = 0 this gives V -> cos^N(pi/2N) V and a DL residual of
 * cos^{N-1}(pi/2N) sin(pi/2N); with t = 1 the N rotations compose to R_y(pi)
 * and all of V ends at DL.
 */
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "cgi/polarization.hpp"

namespace cgi {

/// Per-pass loss probabilities of the optical components.
template <typename Scalar>
struct ComponentLosses {
    Scalar hwp_loss{0};                    ///< per half-wave-plate pass
    Scalar pbs_loss{0};                    ///< per polarizing-splitter traversal
    Scalar mirror_loss_per_outer_cycle{0}; ///< switchable mirror / cycle counter
    Scalar heralding_efficiency{1};        ///< pair heralding; rescales coincidence counts only

    static ComponentLosses ideal() { return {}; }

    /// Realistic bench numbers: 0.1% HWP, 1% PBS, 18% heralding, 15/16 mirror loss.
    static ComponentLosses fig6() {
        return {Scalar(0.001), Scalar(0.01), Scalar(15) / Scalar(16), Scalar(0.18)};
    }

    bool is_ideal_path() const {
        return hwp_loss == 0 && pbs_loss == 0 && mirror_loss_per_outer_cycle == 0;
    }

    void validate() const {
        auto check = [](Scalar p, const char* name) {
            if (!(p >= Scalar(0) && p <= Scalar(1)))
                throw InvalidParameter(std::string(name) + " must lie in [0, 1]");
        };
        check(hwp_loss, "hwp_loss");
        check(pbs_loss, "pbs_loss");
        check(mirror_loss_per_outer_cycle, "mirror_loss_per_outer_cycle");
        check(heralding_efficiency, "heralding_efficiency");
    }

    bool operator==(const ComponentLosses&) const = default;
};

template <typename Scalar>
struct ProtocolParams {
    int outer_cycles{2};
    int inner_cycles{1};
    std::optional<Scalar> outer_rotation_override;
    std::optional<Scalar> inner_rotation_override;
    ComponentLosses<Scalar> losses;

    static ProtocolParams make(int m, int n, ComponentLosses<Scalar> losses = {}) {
        ProtocolParams p;
        p.outer_cycles = m;
        p.inner_cycles = n;
        p.losses = losses;
        p.validate();
        return p;
    }

    /// pi / M unless overridden.
    Scalar outer_rotation() const {
        return outer_rotation_override.value_or(std::numbers::pi_v<Scalar> / Scalar(outer_cycles));
    }
    /// pi / N unless overridden.
    Scalar inner_rotation() const {
        return inner_rotation_override.value_or(std::numbers::pi_v<Scalar> / Scalar(inner_cycles));
    }

    void validate() const {
        if (outer_cycles < 2)
            throw InvalidParameter("outer cycle count M must be >= 2");
        if (inner_cycles < 1)
            throw InvalidParameter("inner cycle count N must be >= 1");
        if (outer_rotation_override && !std::isfinite(*outer_rotation_override))
            throw InvalidParameter("outer rotation must be finite");
        if (inner_rotation_override && !std::isfinite(*inner_rotation_override))
            throw InvalidParameter("inner rotation must be finite");
        losses.validate();
    }

    bool operator==(const ProtocolParams&) const = default;
};

/// The five exclusive fates of the probe photon.
enum class Fate { D0 = 0, D1 = 1, Dl = 2, Object = 3, Component = 4 };

inline constexpr std::array<Fate, 5> kAllFates{Fate::D0, Fate::D1, Fate::Dl, Fate::Object, Fate::Component};

inline const char* fate_name(Fate f) {
    switch (f) {
    case Fate::D0: return "d0";
    case Fate::D1: return "d1";
    case Fate::Dl: return "dl";
    case Fate::Object: return "object";
    case Fate::Component: return "component";
    }
    return "?";
}

template <typename Scalar>
struct OutcomeDistribution {
    Scalar p_d0{0};
    Scalar p_d1{0};
    Scalar p_dl{0};
    Scalar p_object{0};
    Scalar p_component{0};

    Scalar sum() const { return p_d0 + p_d1 + p_dl + p_object + p_component; }

    Scalar operator[](Fate f) const {
        switch (f) {
        case Fate::D0: return p_d0;
        case Fate::D1: return p_d1;
        case Fate::Dl: return p_dl;
        case Fate::Object: return p_object;
        case Fate::Component: return p_component;
        }
        return Scalar(0);
    }

    std::array<Scalar, 5> as_array() const { return {p_d0, p_d1, p_dl, p_object, p_component}; }
};

/// Sends amplitude `v_in` (V-polarized) through the N-cycle inner chain.
/// Returns the V amplitude that leaves the chain; absorbed, DL-bound and
/// component-lost probability is added to `ledger`.
template <typename Scalar>
Complex<Scalar> run_inner_chain(Complex<Scalar> v_in, const ProtocolParams<Scalar>& params,
                                const Transmittance<Scalar>& t, LossLedger<Scalar>& ledger) {
    if (std::abs(v_in) > Scalar(1) + kExactTolerance<Scalar>)
        throw InvalidParameter("inner chain input amplitude exceeds 1");
    const auto& losses = params.losses;
    const JonesMatrix<Scalar> rot = rotation_matrix(params.inner_rotation());

    PolarizationAmplitude<Scalar> psi(Complex<Scalar>(0), v_in);
    for (int cycle = 0; cycle < params.inner_cycles; ++cycle) {
        attenuate_both(psi, losses.pbs_loss, ledger, LossSink::Component);
        attenuate_component(psi, Component::H, t.value(), ledger, LossSink::Object);
        attenuate_both(psi, losses.pbs_loss, ledger, LossSink::Component);
        attenuate_both(psi, losses.hwp_loss, ledger, LossSink::Component);
        psi = rot * psi;
    }
    // final splitter: remaining H to DL
    ledger.p_dl += std::norm(psi(0));
    return psi(1);
}

/// Full protocol evolution from |H>. Exact to rounding; O(M N).
template <typename Scalar>
OutcomeDistribution<Scalar> run_protocol(const ProtocolParams<Scalar>& params, const Transmittance<Scalar>& t) {
    params.validate();
    const auto& losses = params.losses;
    const JonesMatrix<Scalar> rot = rotation_matrix(params.outer_rotation());

    PolarizationAmplitude<Scalar> psi = horizontal<Scalar>();
    LossLedger<Scalar> ledger;
    for (int cycle = 0; cycle < params.outer_cycles; ++cycle) {
        attenuate_both(psi, losses.mirror_loss_per_outer_cycle, ledger, LossSink::Component);
        attenuate_both(psi, losses.hwp_loss, ledger, LossSink::Component);
        psi = rot * psi;
        attenuate_both(psi, losses.pbs_loss, ledger, LossSink::Component);
        psi(1) = run_inner_chain(psi(1), params, t, ledger);
        attenuate_both(psi, losses.pbs_loss, ledger, LossSink::Component);
    }

    OutcomeDistribution<Scalar> out;
    out.p_d0 = std::norm(psi(0));
    out.p_d1 = std::norm(psi(1));
    out.p_dl = ledger.p_dl;
    out.p_object = ledger.p_object;
    out.p_component = ledger.p_component;
    return out;
}

template <typename Scalar>
OutcomeDistribution<Scalar> run_protocol(const ProtocolParams<Scalar>& params, Complex<Scalar> t) {
    return run_protocol(params, Transmittance<Scalar>(t));
}

/// Erroneous D0 probability for an opaque object at M = 2:
/// (cos^N(pi/2N) - 1)^2 / 4.
template <typename Scalar>
Scalar closed_form_p_d0_blocked(int n) {
    if (n < 1)
        throw InvalidParameter("N must be >= 1");
    const Scalar survive = std::pow(std::cos(std::numbers::pi_v<Scalar> / (2 * Scalar(n))), Scalar(n));
    return (survive - 1) * (survive - 1) / 4;
}

/// Open-channel probability of ending at DL: 1 - cos^{2M}(pi/2M).
template <typename Scalar>
Scalar closed_form_p_dl_open(int m) {
    if (m < 2)
        throw InvalidParameter("M must be >= 2");
    return Scalar(1) - std::pow(std::cos(std::numbers::pi_v<Scalar> / (2 * Scalar(m))), Scalar(2 * m));
}

/// P_Int: probability of absorption by an opaque object.
template <typename Scalar>
Scalar interaction_probability(const ProtocolParams<Scalar>& params) {
    return run_protocol(params, Transmittance<Scalar>::blocked()).p_object;
}

using ProtocolParamsd = ProtocolParams<double>;
using ComponentLossesd = ComponentLosses<double>;
using OutcomeDistributiond = OutcomeDistribution<double>;
using Transmittanced = Transmittance<double>;

} // namespace cgi
