// SPDX-License-Identifier: Apache-2.0
#include "nfmimo/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nfmimo/baselines.hpp"
#include "nfmimo/capacity.hpp"
#include "nfmimo/channel.hpp"
#include "nfmimo/io.hpp"
#include "nfmimo/precoding.hpp"

namespace nfmimo {

std::string ArchitectureRequest::label() const {
    if (kind == ArchitectureKind::fully_digital) return to_string(kind);
    return to_string(kind) + (rf_chains > 0 ? ":" + std::to_string(rf_chains) : ":auto");
}

ArchitectureRequest parse_architecture(const std::string& text) {
    const auto parts = split(trim(text), ':');
    ArchitectureRequest request;
    request.kind = architecture_from_string(trim(parts[0]));
    if (parts.size() > 2) throw std::invalid_argument("bad architecture: " + text);
    if (parts.size() == 2) {
        const std::string arg = trim(parts[1]);
        if (arg != "auto") {
            request.rf_chains = std::stoi(arg);
            if (request.rf_chains < 1)
                throw std::invalid_argument("rf_chains must be positive or 'auto'");
        }
    }
    return request;
}

double SweepConfig::wavelength() const {
    if (wavelength_override > 0.0) return wavelength_override;
    return kSpeedOfLight / carrier_frequency;
}

LinkGeometry SweepConfig::link(double distance) const {
    const double lambda = wavelength();
    return LinkGeometry(ArrayGeometry(num_tx, spacing_over_wavelength * lambda, tx_tilt),
                        ArrayGeometry(num_rx, spacing_over_wavelength * lambda, rx_tilt),
                        distance, lambda);
}

void SweepConfig::validate() const {
    if (!(carrier_frequency > 0.0) && !(wavelength_override > 0.0))
        throw std::invalid_argument("carrier frequency must be positive");
    if (num_tx < 1 || num_rx < 1) throw std::invalid_argument("antenna counts must be >= 1");
    if (!(spacing_over_wavelength > 0.0))
        throw std::invalid_argument("spacing_over_wavelength must be positive");
    if (!(std::abs(tx_tilt) < std::numbers::pi / 2) ||
        !(std::abs(rx_tilt) < std::numbers::pi / 2))
        throw std::invalid_argument("|tilt| must be < pi/2");
    if (distances.empty()) throw std::invalid_argument("no distances configured");
    for (double r : distances)
        if (!(r > 0.0)) throw std::invalid_argument("distances must be positive");
    if (snrs_db.empty()) throw std::invalid_argument("no snrs configured");
    if (architectures.empty()) throw std::invalid_argument("no architectures configured");
    if (bound_slack < 0) throw std::invalid_argument("bound_slack must be >= 0");
    if (quadrature_order < 8) throw std::invalid_argument("quadrature_order must be >= 8");
}

double noise_power_for_snr(double snr_db, double channel_power) {
    return channel_power * std::pow(10.0, -snr_db / 10.0);
}

namespace {

constexpr double kTotalPower = 1.0;

int auto_stream_count(const SweepConfig& config, const LinkGeometry& link,
                      double noise_power) {
    const double c_y = bandwidth_parameter(link);
    const PswfSpectrum spectrum = pswf_eigenvalues(
        c_y, default_eigenvalue_count(c_y, config.quadrature_order), config.quadrature_order);
    return select_stream_count(spectrum, config.channel_power(), kTotalPower, noise_power);
}

ResultRecord evaluate_point(const SweepConfig& config, double distance, double snr_db,
                            const ArchitectureRequest& arch) {
    ResultRecord record;
    record.distance = distance;
    record.snr_db = snr_db;
    record.kind = arch.kind;
    record.rf_chains_requested = arch.rf_chains;

    const auto start = std::chrono::steady_clock::now();
    const LinkGeometry link = config.link(distance);
    const double noise = noise_power_for_snr(snr_db, config.channel_power());

    switch (arch.kind) {
        case ArchitectureKind::fully_digital: {
            const ChannelMatrix h = near_field_channel(link);
            record.se_bits = fully_digital_precoder(h, kTotalPower, noise);
            record.ns_chosen = config.num_tx;
            break;
        }
        case ArchitectureKind::fully_connected: {
            const ChannelMatrix h = near_field_channel(link);
            const int rf = arch.rf_chains > 0 ? arch.rf_chains
                                              : auto_stream_count(config, link, noise);
            record.se_bits = fully_connected_baseline(h, rf, kTotalPower, noise);
            record.ns_chosen = rf;
            break;
        }
        case ArchitectureKind::sub_connected_static: {
            const ChannelMatrix h = near_field_channel(link);
            const int rf = arch.rf_chains > 0 ? arch.rf_chains
                                              : auto_stream_count(config, link, noise);
            record.se_bits = sub_connected_static_baseline(h, rf, kTotalPower, noise);
            record.ns_chosen = rf;
            break;
        }
        case ArchitectureKind::dap: {
            const DapResult result =
                dap_pipeline(link, kTotalPower, noise, config.bound_slack,
                             config.quadrature_order, arch.rf_chains);
            record.se_bits = result.se_bits;
            record.ns_chosen = result.precoder.streams;
            break;
        }
    }

    const ArchitectureSpec spec{arch.kind, record.ns_chosen, config.num_tx};
    record.ee = energy_efficiency(record.se_bits, spec, config.power_model, kTotalPower);
    record.runtime_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    return record;
}

std::string scenario_id(std::size_t index) {
    char buffer[16];
    std::snprintf(buffer, sizeof(buffer), "p%04zu", index);
    return buffer;
}

}  // namespace

std::vector<ResultRecord> run_sweep(const SweepConfig& config) {
    config.validate();

    struct Task {
        double distance;
        double snr_db;
        ArchitectureRequest arch;
    };
    std::vector<Task> tasks;
    for (double r : config.distances)
        for (double snr : config.snrs_db)
            for (const auto& arch : config.architectures) tasks.push_back({r, snr, arch});

    std::vector<ResultRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                records[i] = evaluate_point(config, tasks[i].distance, tasks[i].snr_db,
                                            tasks[i].arch);
            } catch (const std::exception& e) {
                ResultRecord failed;
                failed.distance = tasks[i].distance;
                failed.snr_db = tasks[i].snr_db;
                failed.kind = tasks[i].arch.kind;
                failed.rf_chains_requested = tasks[i].arch.rf_chains;
                failed.failed = true;
                failed.failure_reason = e.what();
                records[i] = failed;
            }
        }
    };

    unsigned n_threads = config.threads > 0 ? unsigned(config.threads)
                                            : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, tasks.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < records.size(); ++i) records[i].scenario = scenario_id(i);
    return records;
}

namespace {

std::string sanitize(std::string text) {
    for (char& c : text)
        if (c == ',' || c == '\n') c = ';';
    return text;
}

}  // namespace

void write_records_csv(const std::vector<ResultRecord>& records, std::ostream& out) {
    out << "scenario,distance_m,snr_db,architecture,rf_chains_requested,ns,se_bits,"
           "ee_bits_per_hz_per_w,status,reason\n";
    for (const auto& r : records) {
        out << r.scenario << ',' << format_double(r.distance) << ',' << format_double(r.snr_db)
            << ',' << to_string(r.kind) << ',' << r.rf_chains_requested << ',' << r.ns_chosen
            << ',' << format_double(r.se_bits) << ',' << format_double(r.ee) << ','
            << (r.failed ? "failed" : "ok") << ',' << sanitize(r.failure_reason) << '\n';
    }
}

void write_records_csv(const std::vector<ResultRecord>& records, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output path: " + path);
    write_records_csv(records, file);
    if (!file.good()) throw std::runtime_error("failed writing: " + path);
}

void write_compare_csv(const std::vector<ResultRecord>& records, std::ostream& out) {
    out << "architecture,rf_chains,r,snr_db,se_bits,ee_bits_per_watt\n";
    for (const auto& r : records) {
        if (r.failed) continue;
        out << to_string(r.kind) << ',' << r.ns_chosen << ',' << format_double(r.distance)
            << ',' << format_double(r.snr_db) << ',' << format_double(r.se_bits) << ','
            << format_double(r.ee) << '\n';
    }
}

FigureId figure_from_string(const std::string& name) {
    if (name == "fig2") return FigureId::fig2;
    if (name == "fig3") return FigureId::fig3;
    if (name == "fig5") return FigureId::fig5;
    if (name == "fig6") return FigureId::fig6;
    if (name == "fig7") return FigureId::fig7;
    if (name == "fig8") return FigureId::fig8;
    throw std::invalid_argument("unknown figure: " + name +
                                " (expected fig2/fig3/fig5/fig6/fig7/fig8)");
}

std::string to_string(FigureId id) {
    switch (id) {
        case FigureId::fig2: return "fig2";
        case FigureId::fig3: return "fig3";
        case FigureId::fig5: return "fig5";
        case FigureId::fig6: return "fig6";
        case FigureId::fig7: return "fig7";
        case FigureId::fig8: return "fig8";
    }
    throw std::invalid_argument("unknown figure id");
}

SweepConfig figure_config(FigureId id) {
    SweepConfig config;
    config.wavelength_override = 3e-3;  // 100 GHz carrier, rounded wavelength
    const std::vector<ArchitectureRequest> comparison = {
        {ArchitectureKind::fully_digital, 0},   {ArchitectureKind::fully_connected, 8},
        {ArchitectureKind::fully_connected, 4}, {ArchitectureKind::sub_connected_static, 8},
        {ArchitectureKind::sub_connected_static, 4}, {ArchitectureKind::dap, 0}};
    switch (id) {
        case FigureId::fig2:
            config.distances = {5.0, 10.0, 20.0};
            config.snrs_db = {15.0};
            config.architectures = {{ArchitectureKind::fully_digital, 0}};
            break;
        case FigureId::fig3:
            config.distances = parse_value_list("log:1:100:33");
            config.snrs_db = {15.0};
            config.architectures = {{ArchitectureKind::fully_digital, 0}};
            break;
        case FigureId::fig5:
        case FigureId::fig7:
            config.distances = parse_value_list("log:1:100:25");
            config.snrs_db = {30.0};
            config.architectures = comparison;
            break;
        case FigureId::fig6:
            config.distances = {5.0};
            config.snrs_db = parse_value_list("lin:20:30:11");
            config.architectures = comparison;
            break;
        case FigureId::fig8:
            config.distances = {2.0};
            config.snrs_db = parse_value_list("lin:30:40:6");
            config.architectures = {{ArchitectureKind::fully_digital, 0},
                                    {ArchitectureKind::fully_connected, 4},
                                    {ArchitectureKind::fully_connected, 8},
                                    {ArchitectureKind::fully_connected, 12},
                                    {ArchitectureKind::fully_connected, 0},
                                    {ArchitectureKind::dap, 4},
                                    {ArchitectureKind::dap, 8},
                                    {ArchitectureKind::dap, 12},
                                    {ArchitectureKind::dap, 0}};
            break;
    }
    return config;
}

namespace {

bool contains_value(const std::vector<double>& values, double wanted) {
    for (double v : values)
        if (std::abs(v - wanted) <= 1e-9 * std::max(1.0, std::abs(wanted))) return true;
    return false;
}

void require_distance(const SweepConfig& config, FigureId id, double distance) {
    if (!contains_value(config.distances, distance))
        throw std::invalid_argument("figure " + to_string(id) +
                                    " is missing sweep dimension: distance " +
                                    format_double(distance) + " m");
}

void require_snr(const SweepConfig& config, FigureId id, double snr) {
    if (!contains_value(config.snrs_db, snr))
        throw std::invalid_argument("figure " + to_string(id) +
                                    " is missing sweep dimension: snr " + format_double(snr) +
                                    " dB");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output path: " + path);
    return file;
}

// fig2: per-index singular-value staircase (power-normalized) next to the
// sinc-kernel eigenvalue staircase scaled to the same total power.
void emit_fig2(const SweepConfig& config, std::ostream& out) {
    out << "distance_m,index,sv_calculated,sv_estimated\n";
    for (double r : config.distances) {
        const LinkGeometry link = config.link(r);
        const ChannelMatrix h = near_field_channel(link);
        const std::vector<double> gains = squared_singular_values(h.entries());
        const double c_y = bandwidth_parameter(link);
        const PswfSpectrum spectrum = pswf_eigenvalues(
            c_y, default_eigenvalue_count(c_y, config.quadrature_order),
            config.quadrature_order);
        const double scale = config.channel_power() / spectrum.sum();
        const std::size_t count =
            std::min(gains.size(), spectrum.eigenvalues.size());
        for (std::size_t i = 0; i < count; ++i)
            out << format_double(r) << ',' << i << ',' << format_double(gains[i]) << ','
                << format_double(spectrum.eigenvalues[i] * scale) << '\n';
    }
}

void emit_fig3(const SweepConfig& config, std::ostream& out) {
    out << "r,capacity_exact,capacity_pswf,capacity_dof\n";
    const double noise = noise_power_for_snr(15.0, config.channel_power());
    for (double r : config.distances) {
        const LinkGeometry link = config.link(r);
        const ChannelMatrix h = near_field_channel(link);
        const double exact = exact_capacity(h, kTotalPower, noise).capacity_bits;
        const double c_y = bandwidth_parameter(link);
        const PswfSpectrum spectrum = pswf_eigenvalues(
            c_y, default_eigenvalue_count(c_y, config.quadrature_order),
            config.quadrature_order);
        const double pswf =
            pswf_capacity_estimate(spectrum, config.channel_power(), kTotalPower, noise)
                .capacity_bits;
        const double dof =
            equal_power_capacity_approx(link, config.channel_power(), kTotalPower, noise);
        out << format_double(r) << ',' << format_double(exact) << ',' << format_double(pswf)
            << ',' << format_double(dof) << '\n';
    }
}

void emit_se_vs_distance(const std::vector<ResultRecord>& records, double snr,
                         std::ostream& out, bool energy) {
    out << (energy ? "distance_m,architecture,rf_chains,ns,ee_bits_per_hz_per_w\n"
                   : "distance_m,architecture,rf_chains,ns,se_bits\n");
    for (const auto& r : records) {
        if (r.failed || std::abs(r.snr_db - snr) > 1e-9) continue;
        out << format_double(r.distance) << ',' << to_string(r.kind) << ','
            << r.rf_chains_requested << ',' << r.ns_chosen << ','
            << format_double(energy ? r.ee : r.se_bits) << '\n';
    }
}

}  // namespace

void emit_figure_data(const SweepConfig& config, const std::vector<ResultRecord>& records,
                      FigureId id, const std::string& out_path) {
    if (records.empty())
        throw std::invalid_argument("no records to emit for figure " + to_string(id));

    switch (id) {
        case FigureId::fig2: {
            for (double r : {5.0, 10.0, 20.0}) require_distance(config, id, r);
            auto out = open_output(out_path);
            emit_fig2(config, out);
            break;
        }
        case FigureId::fig3: {
            require_snr(config, id, 15.0);
            if (config.distances.size() < 2)
                throw std::invalid_argument(
                    "figure fig3 is missing sweep dimension: a distance grid");
            auto out = open_output(out_path);
            emit_fig3(config, out);
            break;
        }
        case FigureId::fig5:
        case FigureId::fig7: {
            require_snr(config, id, 30.0);
            if (config.distances.size() < 2)
                throw std::invalid_argument("figure " + to_string(id) +
                                            " is missing sweep dimension: a distance grid");
            auto out = open_output(out_path);
            emit_se_vs_distance(records, 30.0, out, id == FigureId::fig7);
            break;
        }
        case FigureId::fig6: {
            if (config.snrs_db.size() < 2)
                throw std::invalid_argument(
                    "figure fig6 is missing sweep dimension: an snr grid");
            auto out = open_output(out_path);
            out << "snr_db,architecture,rf_chains,ns,se_bits\n";
            const double r0 = config.distances.front();
            for (const auto& r : records) {
                if (r.failed || std::abs(r.distance - r0) > 1e-12) continue;
                out << format_double(r.snr_db) << ',' << to_string(r.kind) << ','
                    << r.rf_chains_requested << ',' << r.ns_chosen << ','
                    << format_double(r.se_bits) << '\n';
            }
            break;
        }
        case FigureId::fig8: {
            require_distance(config, id, 2.0);
            if (config.snrs_db.size() < 2)
                throw std::invalid_argument(
                    "figure fig8 is missing sweep dimension: an snr grid");
            auto out = open_output(out_path);
            out << "snr_db,architecture,rf_chains_requested,ns,se_bits,ee_bits_per_hz_per_w\n";
            for (const auto& r : records) {
                if (r.failed || std::abs(r.distance - 2.0) > 1e-9) continue;
                out << format_double(r.snr_db) << ',' << to_string(r.kind) << ','
                    << r.rf_chains_requested << ',' << r.ns_chosen << ','
                    << format_double(r.se_bits) << ',' << format_double(r.ee) << '\n';
            }
            break;
        }
    }
}

void write_channel_csv(const ChannelMatrix& h, std::ostream& out) {
    out << "rx,tx,re,im\n";
    const auto& entries = h.entries();
    for (Eigen::Index p = 0; p < entries.rows(); ++p)
        for (Eigen::Index q = 0; q < entries.cols(); ++q)
            out << p << ',' << q << ',' << format_double(entries(p, q).real()) << ','
                << format_double(entries(p, q).imag()) << '\n';
}

void write_channel_csv(const ChannelMatrix& h, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output path: " + path);
    write_channel_csv(h, file);
    if (!file.good()) throw std::runtime_error("failed writing: " + path);
}

ChannelMatrix read_channel_csv(std::istream& in, double wavelength, ChannelModel model) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "rx,tx,re,im")
        throw std::invalid_argument("channel file must start with 'rx,tx,re,im'");

    struct Entry {
        long p, q;
        Complex value;
    };
    std::vector<Entry> entries;
    long rows = 0, cols = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto parts = split(line, ',');
        if (parts.size() != 4) throw std::invalid_argument("bad channel row: " + line);
        Entry e{std::stol(parts[0]), std::stol(parts[1]),
                Complex(std::stod(parts[2]), std::stod(parts[3]))};
        if (e.p < 0 || e.q < 0) throw std::invalid_argument("negative index in channel file");
        rows = std::max(rows, e.p + 1);
        cols = std::max(cols, e.q + 1);
        entries.push_back(e);
    }
    if (entries.empty()) throw std::invalid_argument("empty channel file");
    if (static_cast<long>(entries.size()) != rows * cols)
        throw std::invalid_argument("channel file does not cover a full matrix");
    CMatrix m(rows, cols);
    for (const auto& e : entries) m(e.p, e.q) = e.value;
    return ChannelMatrix(std::move(m), wavelength, model);
}

SweepConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open config: " + path);

    SweepConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));

        if (key == "carrier_frequency") config.carrier_frequency = std::stod(value);
        else if (key == "wavelength") config.wavelength_override = std::stod(value);
        else if (key == "num_tx") config.num_tx = std::stoi(value);
        else if (key == "num_rx") config.num_rx = std::stoi(value);
        else if (key == "spacing_over_wavelength") config.spacing_over_wavelength = std::stod(value);
        else if (key == "tx_tilt") config.tx_tilt = std::stod(value);
        else if (key == "rx_tilt") config.rx_tilt = std::stod(value);
        else if (key == "distances") config.distances = parse_value_list(value);
        else if (key == "snrs") config.snrs_db = parse_value_list(value);
        else if (key == "architectures") {
            config.architectures.clear();
            for (const auto& part : split(value, ','))
                if (!trim(part).empty()) config.architectures.push_back(parse_architecture(part));
        } else if (key == "bound_slack") config.bound_slack = std::stoi(value);
        else if (key == "quadrature_order") config.quadrature_order = std::stoi(value);
        else if (key == "output") config.output_path = value;
        else if (key == "threads") config.threads = std::stoi(value);
        else if (key == "p_static") config.power_model.p_static = std::stod(value);
        else if (key == "p_rf_chain") config.power_model.p_rf_chain = std::stod(value);
        else if (key == "p_phase_shifter") config.power_model.p_phase_shifter = std::stod(value);
        else if (key == "p_switch") config.power_model.p_switch = std::stod(value);
        else if (key == "p_power_amp") config.power_model.p_power_amp = std::stod(value);
        else
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
    }
    config.validate();
    return config;
}

}  // namespace nfmimo
