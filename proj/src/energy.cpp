// SPDX-License-Identifier: Apache-2.0
#include "nfmimo/energy.hpp"

#include <stdexcept>

namespace nfmimo {

std::string to_string(ArchitectureKind kind) {
    switch (kind) {
        case ArchitectureKind::fully_digital: return "fully_digital";
        case ArchitectureKind::fully_connected: return "fully_connected";
        case ArchitectureKind::sub_connected_static: return "sub_connected";
        case ArchitectureKind::dap: return "dap";
    }
    throw std::invalid_argument("unknown architecture kind");
}

ArchitectureKind architecture_from_string(const std::string& name) {
    if (name == "fully_digital" || name == "fd") return ArchitectureKind::fully_digital;
    if (name == "fully_connected" || name == "fc") return ArchitectureKind::fully_connected;
    if (name == "sub_connected" || name == "sub_connected_static" || name == "sc")
        return ArchitectureKind::sub_connected_static;
    if (name == "dap") return ArchitectureKind::dap;
    throw std::invalid_argument("unknown architecture: " + name);
}

namespace {

void check(const ArchitectureSpec& arch) {
    if (arch.rf_chains < 1 || arch.antennas < 1)
        throw std::invalid_argument("architecture counts must be positive");
    if (arch.kind == ArchitectureKind::fully_digital && arch.rf_chains != arch.antennas)
        throw std::invalid_argument("fully-digital requires one RF chain per antenna");
}

}  // namespace

int phase_shifter_count(const ArchitectureSpec& arch) {
    check(arch);
    switch (arch.kind) {
        case ArchitectureKind::fully_digital: return 0;
        case ArchitectureKind::fully_connected: return arch.antennas * arch.rf_chains;
        case ArchitectureKind::sub_connected_static:
        case ArchitectureKind::dap: return arch.antennas;
    }
    return 0;
}

int switch_count(const ArchitectureSpec& arch) {
    check(arch);
    return arch.kind == ArchitectureKind::dap ? arch.rf_chains : 0;
}

double consumed_power_watts(const ArchitectureSpec& arch, const PowerModel& model) {
    check(arch);
    const double milliwatts = model.p_static + arch.rf_chains * model.p_rf_chain +
                              phase_shifter_count(arch) * model.p_phase_shifter +
                              switch_count(arch) * model.p_switch +
                              arch.antennas * model.p_power_amp;
    return milliwatts * 1e-3;
}

double energy_efficiency(double se_bits, const ArchitectureSpec& arch,
                         const PowerModel& model, double transmit_power) {
    if (se_bits < 0.0) throw std::invalid_argument("spectrum efficiency must be >= 0");
    (void)transmit_power;  // consumption model counts circuit blocks only
    return se_bits / consumed_power_watts(arch, model);
}

}  // namespace nfmimo
