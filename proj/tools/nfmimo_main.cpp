// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: DoF spectra, capacity sweeps, precoder runs,
// architecture comparisons and figure-data generation.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nfmimo/baselines.hpp"
#include "nfmimo/capacity.hpp"
#include "nfmimo/channel.hpp"
#include "nfmimo/io.hpp"
#include "nfmimo/precoding.hpp"
#include "nfmimo/sweep.hpp"

namespace {

using namespace nfmimo;

struct CommonOptions {
    std::string config_path;
    std::optional<double> carrier;
    std::optional<double> wavelength;
    std::optional<int> num_tx;
    std::optional<int> num_rx;
    std::optional<double> spacing_over_wavelength;
    std::optional<double> tx_tilt;
    std::optional<double> rx_tilt;
    std::optional<std::string> distances;
    std::optional<std::string> snrs;
    std::optional<std::string> architectures;
    std::optional<int> bound_slack;
    std::optional<int> quadrature_order;
    std::optional<int> threads;
    std::string out_path;
};

void add_common_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "key = value configuration file");
    cmd->add_option("--carrier", opt.carrier, "carrier frequency in Hz");
    cmd->add_option("--wavelength", opt.wavelength, "wavelength in m (overrides carrier)");
    cmd->add_option("--tx", opt.num_tx, "transmit antenna count");
    cmd->add_option("--rx", opt.num_rx, "receive antenna count");
    cmd->add_option("--spacing", opt.spacing_over_wavelength, "element spacing over wavelength");
    cmd->add_option("--tx-tilt", opt.tx_tilt, "transmit array tilt in radians");
    cmd->add_option("--rx-tilt", opt.rx_tilt, "receive array tilt in radians");
    cmd->add_option("--distances", opt.distances, "list: 1,2,5 or log:lo:hi:n or lin:lo:hi:n");
    cmd->add_option("--snrs", opt.snrs, "SNR list in dB, same list syntax");
    cmd->add_option("--architectures", opt.architectures,
                    "comma list, e.g. fully_digital,fc:8,sc:8,dap:auto");
    cmd->add_option("--bound-slack", opt.bound_slack, "subarray bound slack over ceil(Nt/Ns)");
    cmd->add_option("--quadrature-order", opt.quadrature_order, "Nystrom quadrature order");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out", opt.out_path, "output file (default stdout)");
}

SweepConfig make_config(const CommonOptions& opt, SweepConfig base = SweepConfig{}) {
    SweepConfig config = opt.config_path.empty() ? std::move(base) : load_config(opt.config_path);
    if (opt.carrier) {
        config.carrier_frequency = *opt.carrier;
        config.wavelength_override = 0.0;
    }
    if (opt.wavelength) config.wavelength_override = *opt.wavelength;
    if (opt.num_tx) config.num_tx = *opt.num_tx;
    if (opt.num_rx) config.num_rx = *opt.num_rx;
    if (opt.spacing_over_wavelength) config.spacing_over_wavelength = *opt.spacing_over_wavelength;
    if (opt.tx_tilt) config.tx_tilt = *opt.tx_tilt;
    if (opt.rx_tilt) config.rx_tilt = *opt.rx_tilt;
    if (opt.distances) config.distances = parse_value_list(*opt.distances);
    if (opt.snrs) config.snrs_db = parse_value_list(*opt.snrs);
    if (opt.architectures) {
        config.architectures.clear();
        for (const auto& part : split(*opt.architectures, ','))
            if (!trim(part).empty()) config.architectures.push_back(parse_architecture(part));
    }
    if (opt.bound_slack) config.bound_slack = *opt.bound_slack;
    if (opt.quadrature_order) config.quadrature_order = *opt.quadrature_order;
    if (opt.threads) config.threads = *opt.threads;
    if (!opt.out_path.empty()) config.output_path = opt.out_path;
    return config;
}

// Writes through a file when a path is set, stdout otherwise.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output path: " + path);
    fn(file);
    if (!file.good()) throw std::runtime_error("failed writing: " + path);
}

int cmd_dof(const CommonOptions& opt, double distance, int count) {
    SweepConfig config = make_config(opt);
    const LinkGeometry link = config.link(distance);
    const double c_y = bandwidth_parameter(link);
    if (count <= 0) count = default_eigenvalue_count(c_y, config.quadrature_order);
    const PswfSpectrum spectrum = pswf_eigenvalues(c_y, count, config.quadrature_order);
    with_output(config.output_path, [&](std::ostream& out) {
        out << "index,eigenvalue\n";
        for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i)
            out << i << ',' << format_double(spectrum.eigenvalues[i]) << '\n';
    });
    std::cerr << "c_y = " << format_double(c_y)
              << ", dof_estimate = " << format_double(dof_estimate(link)) << '\n';
    return 0;
}

int cmd_capacity(const CommonOptions& opt, double snr_db) {
    SweepConfig config = make_config(opt);
    const double noise = noise_power_for_snr(snr_db, config.channel_power());
    with_output(config.output_path, [&](std::ostream& out) {
        out << "r,exact_bits,pswf_estimate_bits,equal_power_bits\n";
        for (double r : config.distances) {
            const LinkGeometry link = config.link(r);
            const ChannelMatrix h = near_field_channel(link);
            const double exact = exact_capacity(h, 1.0, noise).capacity_bits;
            const double c_y = bandwidth_parameter(link);
            const PswfSpectrum spectrum = pswf_eigenvalues(
                c_y, default_eigenvalue_count(c_y, config.quadrature_order),
                config.quadrature_order);
            const double pswf =
                pswf_capacity_estimate(spectrum, config.channel_power(), 1.0, noise)
                    .capacity_bits;
            const double eq =
                equal_power_capacity_approx(link, config.channel_power(), 1.0, noise);
            out << format_double(r) << ',' << format_double(exact) << ','
                << format_double(pswf) << ',' << format_double(eq) << '\n';
        }
    });
    return 0;
}

int cmd_precode(const CommonOptions& opt, double distance, double snr_db, int forced_ns) {
    SweepConfig config = make_config(opt);
    const LinkGeometry link = config.link(distance);
    const double noise = noise_power_for_snr(snr_db, config.channel_power());
    const DapResult result = dap_pipeline(link, 1.0, noise, config.bound_slack,
                                          config.quadrature_order, forced_ns);

    // Per-stream transmit powers ||F_A F_S F_D e_i||^2.
    const auto& triple = result.precoder;
    std::vector<double> stream_power(triple.streams, 0.0);
    for (int j = 0; j < triple.selection.rows(); ++j) {
        const int chain = triple.selection.chain_of(j);
        for (int i = 0; i < triple.streams; ++i)
            stream_power[i] += std::norm(triple.analog.phases(j) * triple.digital(chain, i));
    }

    with_output(config.output_path, [&](std::ostream& out) {
        out << "key,value\n";
        out << "distance_m," << format_double(distance) << '\n';
        out << "snr_db," << format_double(snr_db) << '\n';
        out << "bandwidth_parameter," << format_double(result.bandwidth_parameter) << '\n';
        out << "ns," << triple.streams << '\n';
        out << "se_bits," << format_double(result.se_bits) << '\n';
        std::string sizes;
        for (const auto& s : result.partition.sets) {
            if (!sizes.empty()) sizes += ' ';
            sizes += std::to_string(s.size());
        }
        out << "partition_sizes," << sizes << '\n';
        for (int i = 0; i < triple.streams; ++i)
            out << "stream_power_" << i + 1 << ',' << format_double(stream_power[i]) << '\n';
    });
    return 0;
}

int cmd_compare(const CommonOptions& opt) {
    SweepConfig config = make_config(opt);
    const auto records = run_sweep(config);
    with_output(config.output_path, [&](std::ostream& out) { write_compare_csv(records, out); });
    for (const auto& r : records)
        if (r.failed)
            std::cerr << "point failed: " << to_string(r.kind) << " r=" << r.distance
                      << " snr=" << r.snr_db << ": " << r.failure_reason << '\n';
    return 0;
}

int cmd_sweep(const CommonOptions& opt) {
    SweepConfig config = make_config(opt);
    const auto records = run_sweep(config);
    with_output(config.output_path, [&](std::ostream& out) { write_records_csv(records, out); });
    return 0;
}

int cmd_figure(const CommonOptions& opt, const std::string& figure_name,
               const std::string& records_path) {
    const FigureId id = figure_from_string(figure_name);
    SweepConfig config = make_config(opt, figure_config(id));
    const auto records = run_sweep(config);
    if (!records_path.empty()) write_records_csv(records, records_path);
    const std::string out =
        config.output_path.empty() ? to_string(id) + ".csv" : config.output_path;
    emit_figure_data(config, records, id, out);
    std::cerr << "wrote " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-field XL-MIMO channel, capacity and precoding toolkit"};
    app.require_subcommand(1);

    CommonOptions opt;
    double distance = 5.0;
    double snr_db = 15.0;
    int count = 0;
    int forced_ns = 0;
    std::string figure_name;
    std::string records_path;

    auto* dof = app.add_subcommand("dof", "sinc-kernel eigenvalue spectrum as CSV");
    add_common_options(dof, opt);
    dof->add_option("--distance", distance, "link distance in m")->required();
    dof->add_option("--count", count, "eigenvalues to emit (default: knee + margin)");

    auto* capacity = app.add_subcommand("capacity", "capacity estimates over distance");
    add_common_options(capacity, opt);
    capacity->add_option("--snr", snr_db, "SNR in dB (default 15)");

    auto* precode = app.add_subcommand("precode", "run the distance-aware precoder once");
    add_common_options(precode, opt);
    precode->add_option("--distance", distance, "link distance in m")->required();
    precode->add_option("--snr", snr_db, "SNR in dB")->required();
    precode->add_option("--ns", forced_ns, "force the stream count (0 = water-filling choice)");

    auto* compare = app.add_subcommand("compare", "architecture comparison CSV");
    add_common_options(compare, opt);

    auto* sweep = app.add_subcommand("sweep", "full sweep records CSV");
    add_common_options(sweep, opt);

    auto* figure = app.add_subcommand("figure", "reproduce one figure's data file");
    add_common_options(figure, opt);
    figure->add_option("--figure", figure_name, "fig2|fig3|fig5|fig6|fig7|fig8")->required();
    figure->add_option("--records", records_path, "also write the raw sweep records");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dof->parsed()) return cmd_dof(opt, distance, count);
        if (capacity->parsed()) return cmd_capacity(opt, snr_db);
        if (precode->parsed()) return cmd_precode(opt, distance, snr_db, forced_ns);
        if (compare->parsed()) return cmd_compare(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (figure->parsed()) return cmd_figure(opt, figure_name, records_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
