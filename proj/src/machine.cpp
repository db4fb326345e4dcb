#include "dwig/machine.hpp"

#include <cmath>
#include <sstream>

namespace dwig {

namespace {

bool all_finite(const Vec7& v) {
    return v.allFinite() && v.cwiseAbs().maxCoeff() <= kDivergenceBound;
}

/// Relative invertibility tolerance for the coupling matrix.
constexpr double kRcondTol = 1e-10;

} // namespace

void MachineParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string("machine parameter must be positive: ") + name);
        }
    };
    positive(r1, "r1");
    positive(r2, "r2");
    positive(r3, "r3");
    positive(l1, "l1");
    positive(l2, "l2");
    positive(l3, "l3");
    positive(inertia_h, "inertia_h");
    positive(base_voltage_v, "base_voltage_v");
    for (double m : {m_d12, m_q12, m_d1r, m_q1r, m_d2r, m_q2r, omega1, base_torque}) {
        if (!std::isfinite(m)) {
            throw ConfigError("machine parameter is not finite");
        }
    }
    (void)build_inductance_matrix(*this); // throws if singular
}

Vec6 MachineState::fluxes() const {
    Vec6 v;
    v << psi_d1, psi_q1, psi_d2, psi_q2, psi_dr, psi_qr;
    return v;
}

Vec7 MachineState::as_vector() const {
    Vec7 v;
    v << psi_d1, psi_q1, psi_d2, psi_q2, psi_dr, psi_qr, omega;
    return v;
}

MachineState MachineState::from_vector(const Vec7& x) {
    return MachineState{x[0], x[1], x[2], x[3], x[4], x[5], x[6]};
}

Vec6 Currents6::as_vector() const {
    Vec6 v;
    v << i_d1, i_q1, i_d2, i_q2, i_dr, i_qr;
    return v;
}

Currents6 Currents6::from_vector(const Vec6& v) {
    return Currents6{v[0], v[1], v[2], v[3], v[4], v[5]};
}

Mat6 build_inductance_matrix(const MachineParams& p) {
    Mat6 L = Mat6::Zero();
    if (p.coupling == CouplingLayout::Literal) {
        // Cross-index placement, row by row (flux <- current). The
        // rotor current terms are written against a two-projection
        // rotor frame; the second projection does not exist on this
        // machine and its components drop out, leaving one entry per
        // rotor coupling. Note the rotor rows see the stator with
        // opposite sign, so the matrix is not symmetric.
        // d1 <- l1*i_d1 + m_d12*i_q2 + m_d1r*i_dr
        L(D1, D1) = p.l1;
        L(D1, Q2) = p.m_d12;
        L(D1, DR) = p.m_d1r;
        // q1 <- l1*i_q1 + m_q12*i_d2 + m_q1r*i_qr
        L(Q1, Q1) = p.l1;
        L(Q1, D2) = p.m_q12;
        L(Q1, QR) = p.m_q1r;
        // d2 <- l2*i_d2 + m_q12*i_q1 + m_q2r*i_qr
        L(D2, D2) = p.l2;
        L(D2, Q1) = p.m_q12;
        L(D2, QR) = p.m_q2r;
        // q2 <- l2*i_q2 + m_d12*i_d1 + m_d2r*i_dr
        L(Q2, Q2) = p.l2;
        L(Q2, D1) = p.m_d12;
        L(Q2, DR) = p.m_d2r;
        // dr <- l3*i_dr + m_d1r*i_d1 - m_d2r*i_q2
        L(DR, DR) = p.l3;
        L(DR, D1) = p.m_d1r;
        L(DR, Q2) = -p.m_d2r;
        // qr <- l3*i_qr + m_q1r*i_q1 - m_q2r*i_d2
        L(QR, QR) = p.l3;
        L(QR, Q1) = p.m_q1r;
        L(QR, D2) = -p.m_q2r;
    } else {
        // Conventional same-axis placement; m_d12/m_q12 act as the
        // stator-stator mutuals of their own axis. Symmetric by
        // construction.
        L(D1, D1) = p.l1;
        L(D1, D2) = p.m_d12;
        L(D1, DR) = p.m_d1r;
        L(Q1, Q1) = p.l1;
        L(Q1, Q2) = p.m_q12;
        L(Q1, QR) = p.m_q1r;
        L(D2, D2) = p.l2;
        L(D2, D1) = p.m_d12;
        L(D2, DR) = p.m_d2r;
        L(Q2, Q2) = p.l2;
        L(Q2, Q1) = p.m_q12;
        L(Q2, QR) = p.m_q2r;
        L(DR, DR) = p.l3;
        L(DR, D1) = p.m_d1r;
        L(DR, D2) = p.m_d2r;
        L(QR, QR) = p.l3;
        L(QR, Q1) = p.m_q1r;
        L(QR, Q2) = p.m_q2r;
    }

    Eigen::PartialPivLU<Mat6> lu(L);
    if (!(lu.rcond() > kRcondTol)) {
        std::ostringstream msg;
        msg << "inductance matrix numerically singular (rcond " << lu.rcond() << ")";
        throw SingularInductanceMatrix(msg.str());
    }
    return L;
}

Currents6 currents_from_fluxes(const Mat6& lmat, const Vec6& psi) {
    Eigen::PartialPivLU<Mat6> lu(lmat);
    if (!(lu.rcond() > kRcondTol)) {
        throw SingularInductanceMatrix("inductance matrix numerically singular");
    }
    return Currents6::from_vector(lu.solve(psi));
}

double electromagnetic_torque(const MachineState& s, const Currents6& i) {
    return (s.psi_d1 * i.i_q1 - s.psi_q1 * i.i_d1) +
           (s.psi_d2 * i.i_q2 - s.psi_q2 * i.i_d2);
}

double terminal_voltage(const Currents6& currents, double r_load) {
    return r_load * std::hypot(currents.i_d1, currents.i_q1);
}

MachineModel::MachineModel(const MachineParams& params)
    : params_(params), lmat_(build_inductance_matrix(params)), lu_(lmat_) {}

Currents6 MachineModel::currents(const Vec6& psi) const {
    return Currents6::from_vector(lu_.solve(psi));
}

Vec7 MachineModel::derivative(const Vec7& x, const MachineInputs& in) const {
    if (!all_finite(x)) {
        throw DivergedState("state outside finite range", 0.0);
    }
    const Vec6 psi = x.head<6>();
    const Vec6 cur = lu_.solve(psi);
    const double omega = x[6];
    const MachineParams& p = params_;

    const double u_d1 = -in.r_load * cur[D1];
    const double u_q1 = -in.r_load * cur[Q1];
    const double slip = p.omega1 - omega;

    Vec7 d;
    d[D1] = u_d1 - p.r1 * cur[D1] + p.omega1 * psi[Q1];
    d[Q1] = u_q1 - p.r1 * cur[Q1] - p.omega1 * psi[D1];
    d[D2] = in.u_d2 - p.r2 * cur[D2] + p.omega1 * psi[Q2];
    d[Q2] = in.u_q2 - p.r2 * cur[Q2] - p.omega1 * psi[D2];
    d[DR] = in.u_dr - p.r3 * cur[DR] + slip * psi[QR];
    d[QR] = in.u_qr - p.r3 * cur[QR] - slip * psi[DR];

    const MachineState s = MachineState::from_vector(x);
    const double te = electromagnetic_torque(s, Currents6::from_vector(cur));
    // Motion: the air-gap torque as defined above accelerates the rotor
    // and the shaft torque opposes it; this orientation makes the
    // torque-balanced operating point attracting.
    d[6] = (te - in.tm) / (2.0 * p.inertia_h);

    if (!d.allFinite()) {
        throw DivergedState("derivative not finite", 0.0);
    }
    return d;
}

Vec7 MachineModel::rk4_step(const Vec7& x, const MachineInputs& in, double h) const {
    if (!(h > 0.0) || h > 0.01) {
        throw std::invalid_argument("rk4 step size must satisfy 0 < h <= 0.01");
    }
    const Vec7 k1 = derivative(x, in);
    const Vec7 k2 = derivative(x + 0.5 * h * k1, in);
    const Vec7 k3 = derivative(x + 0.5 * h * k2, in);
    const Vec7 k4 = derivative(x + h * k3, in);
    Vec7 next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!all_finite(next)) {
        throw DivergedState("integration diverged", 0.0);
    }
    return next;
}

MachineState MachineModel::steady_state(const MachineInputs& in, double omega_fixed) const {
    const MachineParams& p = params_;
    // With flux derivatives pinned to zero the winding equations reduce
    // to (R_eff - S*L) i = u_ext, where R_eff folds the load resistance
    // into the load-winding rows and S is the speed-coupling matrix
    // acting on fluxes.
    Mat6 S = Mat6::Zero();
    S(D1, Q1) = p.omega1;
    S(Q1, D1) = -p.omega1;
    S(D2, Q2) = p.omega1;
    S(Q2, D2) = -p.omega1;
    const double slip = p.omega1 - omega_fixed;
    S(DR, QR) = slip;
    S(QR, DR) = -slip;

    Vec6 reff;
    reff << p.r1 + in.r_load, p.r1 + in.r_load, p.r2, p.r2, p.r3, p.r3;

    Mat6 A = reff.asDiagonal();
    A -= S * lmat_;

    Vec6 u_ext;
    u_ext << 0.0, 0.0, in.u_d2, in.u_q2, in.u_dr, in.u_qr;

    Eigen::PartialPivLU<Mat6> lu(A);
    if (!(lu.rcond() > kRcondTol)) {
        throw SingularSystem("steady-state system numerically singular");
    }
    const Vec6 cur = lu.solve(u_ext);
    const Vec6 psi = lmat_ * cur;

    MachineState out = MachineState::from_vector((Vec7() << psi, omega_fixed).finished());
    return out;
}

Vec7 state_derivative(const MachineParams& params, const MachineState& state,
                      const MachineInputs& inputs) {
    return MachineModel(params).derivative(state.as_vector(), inputs);
}

MachineState step_rk4(const MachineParams& params, const MachineState& state,
                      const MachineInputs& inputs, double h) {
    return MachineState::from_vector(MachineModel(params).rk4_step(state.as_vector(), inputs, h));
}

MachineState steady_state(const MachineParams& params, const MachineInputs& inputs,
                          double omega_fixed) {
    return MachineModel(params).steady_state(inputs, omega_fixed);
}

} // namespace dwig
