#include "evagan/emit.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace evagan {
namespace {

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: stable newlines
    if (!out) throw std::runtime_error("emit: cannot write " + path);
    return out;
}

} // namespace

void emit_metrics_csv(const std::vector<EpochMetrics>& records, const std::string& path,
                      bool zero_wall) {
    if (records.empty()) throw std::invalid_argument("emit_metrics_csv: no records");
    auto out = open_out(path);
    out << "epoch,gen_validity,fake_min_eva,real_maj_est,real_min_eva,"
           "d_loss_real_minority,d_loss_fake_minority,d_loss_majority,g_loss,wall_seconds\n";
    for (const auto& r : records) {
        out << r.epoch << ',' << fmt(r.gen_validity) << ',' << fmt(r.fake_min_eva) << ','
            << fmt(r.real_maj_est) << ',' << fmt(r.real_min_eva) << ','
            << fmt(r.losses.d_loss_real_minority) << ',' << fmt(r.losses.d_loss_fake_minority)
            << ',' << fmt(r.losses.d_loss_majority) << ',' << fmt(r.losses.g_loss) << ','
            << (zero_wall ? "0" : fmt(r.wall_seconds)) << '\n';
    }
}

void emit_timings_csv(const std::vector<EpochMetrics>& records, const std::string& path) {
    if (records.empty()) throw std::invalid_argument("emit_timings_csv: no records");
    auto out = open_out(path);
    out << "epoch,wall_seconds\n";
    for (const auto& r : records) out << r.epoch << ',' << fmt(r.wall_seconds) << '\n';
}

void emit_manifest(const std::string& config_json, const std::string& path) {
    auto out = open_out(path);
    out << config_json;
    if (config_json.empty() || config_json.back() != '\n') out << '\n';
}

std::string version_string() { return "evagan-0.1.0"; }

} // namespace evagan
