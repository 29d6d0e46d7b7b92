#ifndef PTXSIM_RADIO_HPP
#define PTXSIM_RADIO_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace ptxsim {

// First-order radio model. Transmit cost is k*e_elec plus a distance term
// that switches from free-space (d^2) to multipath (d^4) at the crossover
// distance d0; receive cost is k*e_elec.
struct RadioParams {
    double e_elec = 50e-9;        // J/bit
    double eps_fs = 10e-12;       // J/bit/m^2
    double eps_mp = 0.0013e-12;   // J/bit/m^4
    double d0 = 0.0;              // m, derived when left at 0
    double msg_bits = 1000.0;     // report payload size k

    void validate() const {
        if (e_elec <= 0.0) throw std::invalid_argument("radio.e_elec: must be > 0");
        if (eps_fs <= 0.0) throw std::invalid_argument("radio.eps_fs: must be > 0");
        if (eps_mp <= 0.0) throw std::invalid_argument("radio.eps_mp: must be > 0");
        if (d0 <= 0.0) throw std::invalid_argument("radio.d0: must be > 0");
        if (msg_bits <= 0.0) throw std::invalid_argument("radio.msg_bits: must be > 0");
    }
};

// Fills d0 from the amplifier constants unless explicitly overridden.
inline RadioParams resolve_radio(RadioParams rp) {
    if (rp.d0 == 0.0) rp.d0 = std::sqrt(rp.eps_fs / rp.eps_mp);
    rp.validate();
    return rp;
}

inline RadioParams default_radio() { return resolve_radio(RadioParams{}); }

// Energy to transmit k bits over distance d.
inline double tx_energy(double k, double d, const RadioParams& rp) {
    if (k < 0.0) throw std::domain_error("tx_energy: k must be >= 0");
    if (d < 0.0) throw std::domain_error("tx_energy: d must be >= 0");
    if (d < rp.d0) return k * rp.e_elec + k * rp.eps_fs * d * d;
    return k * rp.e_elec + k * rp.eps_mp * d * d * d * d;
}

// Energy to receive k bits.
inline double rx_energy(double k, const RadioParams& rp) {
    if (k < 0.0) throw std::domain_error("rx_energy: k must be >= 0");
    return k * rp.e_elec;
}

}  // namespace ptxsim

#endif
