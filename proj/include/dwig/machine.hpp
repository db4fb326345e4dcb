#ifndef DWIG_MACHINE_HPP
#define DWIG_MACHINE_HPP

#include <Eigen/Dense>

#include "dwig/errors.hpp"

namespace dwig {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;

/// Flux/current component ordering used for every 6-vector and the
/// inductance matrix: (d1, q1, d2, q2, dr, qr). Winding 1 feeds the
/// load, winding 2 is the excitation winding, r is the rotor cage.
enum Axis6 : int { D1 = 0, Q1 = 1, D2 = 2, Q2 = 3, DR = 4, QR = 5 };

/// How the mutual-inductance couplings are placed in the 6x6 matrix.
///
/// Literal puts the winding 1 <-> 2 mutuals across axes (d1<->q2,
/// q1<->d2) and mixes the winding 2 <-> rotor axes, with the rotor
/// rows seeing part of the stator couplings sign-flipped; the matrix
/// is not symmetric. Symmetric places every coupling on its own axis
/// with reciprocal signs, the conventional dq structure, and is the
/// layout the shipped default configuration uses.
enum class CouplingLayout { Literal, Symmetric };

/// Per-unit electrical and mechanical constants of the machine.
struct MachineParams {
    double r1 = 0.0; ///< load-winding resistance
    double r2 = 0.0; ///< excitation-winding resistance
    double r3 = 0.0; ///< rotor resistance
    double l1 = 0.0; ///< load-winding self-inductance
    double l2 = 0.0; ///< excitation-winding self-inductance
    double l3 = 0.0; ///< rotor self-inductance
    double m_d12 = 0.0, m_q12 = 0.0; ///< winding 1 <-> winding 2 mutuals
    double m_d1r = 0.0, m_q1r = 0.0; ///< winding 1 <-> rotor mutuals
    double m_d2r = 0.0, m_q2r = 0.0; ///< winding 2 <-> rotor mutuals
    double omega1 = 1.0;             ///< synchronous electrical speed
    double inertia_h = 3.0;          ///< inertia constant, seconds
    double base_voltage_v = 440.0;   ///< volts per 1.0 p.u., reporting only
    double base_torque = 1.0;        ///< per-unit torque reference
    CouplingLayout coupling = CouplingLayout::Symmetric;

    /// Throws ConfigError on sign violations, SingularInductanceMatrix
    /// if the coupling matrix cannot be inverted at tolerance 1e-10.
    void validate() const;
};

/// The seven integrated states: six flux linkages plus rotor speed.
struct MachineState {
    double psi_d1 = 0.0, psi_q1 = 0.0;
    double psi_d2 = 0.0, psi_q2 = 0.0;
    double psi_dr = 0.0, psi_qr = 0.0;
    double omega = 0.0;

    Vec6 fluxes() const;
    Vec7 as_vector() const;
    static MachineState from_vector(const Vec7& x);
};

/// Exogenous quantities held constant across an integration step.
struct MachineInputs {
    double u_d2 = 0.0, u_q2 = 0.0; ///< excitation voltages
    double tm = 0.0;               ///< mechanical torque
    double r_load = 1.0;           ///< terminal load resistance
    double u_dr = 0.0, u_qr = 0.0; ///< rotor voltages (0 = shorted cage)
};

struct Currents6 {
    double i_d1 = 0.0, i_q1 = 0.0;
    double i_d2 = 0.0, i_q2 = 0.0;
    double i_dr = 0.0, i_qr = 0.0;

    Vec6 as_vector() const;
    static Currents6 from_vector(const Vec6& v);
};

/// Largest admissible magnitude of any state component; beyond this the
/// simulation is treated as diverged.
inline constexpr double kDivergenceBound = 1e6;

/// Assembles the 6x6 flux/current coupling matrix for the given layout.
Mat6 build_inductance_matrix(const MachineParams& params);

/// Solves L * i = psi. Throws SingularInductanceMatrix.
Currents6 currents_from_fluxes(const Mat6& lmat, const Vec6& psi);

/// Air-gap torque as the dq cross product summed over both stator
/// windings: psi_d1*i_q1 - psi_q1*i_d1 + psi_d2*i_q2 - psi_q2*i_d2.
double electromagnetic_torque(const MachineState& state, const Currents6& currents);

/// Voltage magnitude across the resistive load: r_load * |i1|.
double terminal_voltage(const Currents6& currents, double r_load);

/// Binds a parameter set, caching the inductance matrix factorization.
/// All methods are const and the object is freely shareable.
class MachineModel {
public:
    explicit MachineModel(const MachineParams& params);

    const MachineParams& params() const { return params_; }
    const Mat6& inductance() const { return lmat_; }

    Currents6 currents(const Vec6& psi) const;

    /// Time derivative of (fluxes, omega). The load winding sees
    /// u_d1 = -r_load*i_d1, u_q1 = -r_load*i_q1; rotor rows rotate at
    /// slip speed omega1 - omega. Throws DivergedState if the state or
    /// result leaves the finite range.
    Vec7 derivative(const Vec7& state, const MachineInputs& inputs) const;

    /// Classical fourth-order Runge-Kutta step, inputs held constant.
    /// Requires 0 < h <= 0.01 s.
    Vec7 rk4_step(const Vec7& state, const MachineInputs& inputs, double h) const;

    /// Electrical steady state at a fixed rotor speed: solves the six
    /// winding equations with the flux derivatives pinned to zero.
    /// Throws SingularSystem if the steady-state matrix is degenerate.
    MachineState steady_state(const MachineInputs& inputs, double omega_fixed) const;

private:
    MachineParams params_;
    Mat6 lmat_;
    Eigen::PartialPivLU<Mat6> lu_;
};

/// Free-function forms of the model operations.
Vec7 state_derivative(const MachineParams& params, const MachineState& state,
                      const MachineInputs& inputs);
MachineState step_rk4(const MachineParams& params, const MachineState& state,
                      const MachineInputs& inputs, double h);
MachineState steady_state(const MachineParams& params, const MachineInputs& inputs,
                          double omega_fixed);

} // namespace dwig

#endif
