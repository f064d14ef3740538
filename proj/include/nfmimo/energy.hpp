// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace nfmimo {

enum class ArchitectureKind { fully_digital, fully_connected, sub_connected_static, dap };

std::string to_string(ArchitectureKind kind);
ArchitectureKind architecture_from_string(const std::string& name);

struct ArchitectureSpec {
    ArchitectureKind kind = ArchitectureKind::fully_digital;
    int rf_chains = 1;
    int antennas = 1;
};

/// Component powers of the downlink consumption model, in mW.
struct PowerModel {
    double p_static = 2500.0;        // P_T
    double p_rf_chain = 160.0;       // P_RF
    double p_phase_shifter = 10.0;   // P_PS
    double p_switch = 10.0;          // P_SW
    double p_power_amp = 30.0;       // P_PA
};

/// Phase shifters per architecture: Nt * N_RF for fully-connected, Nt for the
/// sub-connected variants, none for fully-digital.
int phase_shifter_count(const ArchitectureSpec& arch);

/// Only the selection circuit uses switches, one per active RF chain.
int switch_count(const ArchitectureSpec& arch);

/// P_T + N_s P_RF + N_PS P_PS + N_SW P_SW + N_t P_PA, in watts.
double consumed_power_watts(const ArchitectureSpec& arch, const PowerModel& model);

/// Rate per consumed watt, bits/s/Hz/W. The transmit power is part of the
/// rate, not of the consumption model, so `transmit_power` does not enter the
/// denominator.
double energy_efficiency(double se_bits, const ArchitectureSpec& arch,
                         const PowerModel& model, double transmit_power);

}  // namespace nfmimo
