// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nfmimo/channel.hpp"
#include "nfmimo/energy.hpp"
#include "nfmimo/geometry.hpp"
#include "nfmimo/types.hpp"

namespace nfmimo {

/// Architecture under test in a sweep. rf_chains == 0 requests the
/// DoF-matched stream count chosen by water-filling at each sweep point;
/// fully_digital ignores the field.
struct ArchitectureRequest {
    ArchitectureKind kind = ArchitectureKind::fully_digital;
    int rf_chains = 0;

    std::string label() const;
};

ArchitectureRequest parse_architecture(const std::string& text);

struct SweepConfig {
    double carrier_frequency = 100e9;  // Hz
    double wavelength_override = 0.0;  // m; 0 derives lambda from the carrier
    int num_tx = 256;
    int num_rx = 256;
    double spacing_over_wavelength = 0.5;
    double tx_tilt = 0.0;  // radians
    double rx_tilt = 0.0;
    std::vector<double> distances = {5.0};  // meters
    std::vector<double> snrs_db = {30.0};
    std::vector<ArchitectureRequest> architectures = {
        {ArchitectureKind::fully_digital, 0}};
    int bound_slack = 2;
    int quadrature_order = 512;
    std::string output_path;
    PowerModel power_model;
    int threads = 0;  // 0 = hardware concurrency

    double wavelength() const;
    double spacing() const { return spacing_over_wavelength * wavelength(); }
    double channel_power() const { return double(num_tx) * double(num_rx); }
    LinkGeometry link(double distance) const;
    void validate() const;
};

/// SNR is referenced to the aggregate channel gain: with P_tot = 1 the noise
/// floor is sigma^2 = channel_power * 10^(-snr_db/10), which makes the
/// per-subchannel operating point independent of the array size.
double noise_power_for_snr(double snr_db, double channel_power);

/// One evaluated (distance, snr, architecture) point.
struct ResultRecord {
    std::string scenario;
    double distance = 0.0;
    double snr_db = 0.0;
    ArchitectureKind kind = ArchitectureKind::fully_digital;
    int rf_chains_requested = 0;  // 0 = auto
    int ns_chosen = 0;
    double se_bits = 0.0;
    double ee = 0.0;  // bits/s/Hz/W
    double runtime_ms = 0.0;
    bool failed = false;
    std::string failure_reason;
};

/// Evaluates the Cartesian product of distances x snrs x architectures.
/// Points run concurrently; the returned order is the deterministic
/// (distance, snr, architecture) iteration order regardless of scheduling.
/// A point that throws is returned as a failed record and the sweep continues.
std::vector<ResultRecord> run_sweep(const SweepConfig& config);

/// Record CSV, stable schema (runtime is deliberately not a column so that
/// identical configs produce byte-identical output).
void write_records_csv(const std::vector<ResultRecord>& records, std::ostream& out);
void write_records_csv(const std::vector<ResultRecord>& records, const std::string& path);

/// Comparison CSV: architecture, rf_chains, r, snr_db, se_bits, ee_bits_per_watt.
void write_compare_csv(const std::vector<ResultRecord>& records, std::ostream& out);

enum class FigureId { fig2, fig3, fig5, fig6, fig7, fig8 };

FigureId figure_from_string(const std::string& name);
std::string to_string(FigureId id);

/// Sweep configuration reproducing the simulation setup behind each figure.
SweepConfig figure_config(FigureId id);

/// Writes one figure's CSV. The records supply (and are validated for) the
/// sweep axes; fig2/fig3 recompute their spectra from the config since the
/// per-index staircases are not part of ResultRecord. Throws when a required
/// axis is absent, naming the missing dimension.
void emit_figure_data(const SweepConfig& config, const std::vector<ResultRecord>& records,
                      FigureId id, const std::string& out_path);

/// Key = value configuration file. Unknown keys are rejected.
SweepConfig load_config(const std::string& path);

/// Channel matrix file format: header `rx,tx,re,im` followed by one row per
/// entry, full round-trip precision, row-major order.
void write_channel_csv(const ChannelMatrix& h, std::ostream& out);
void write_channel_csv(const ChannelMatrix& h, const std::string& path);
ChannelMatrix read_channel_csv(std::istream& in, double wavelength, ChannelModel model);

}  // namespace nfmimo
