#include "evagan/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace evagan {
namespace {

constexpr char kMagic[8] = {'E', 'V', 'G', 'C', 'K', 'P', 'T', '1'};

void write_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_string(std::ostream& os, const std::string& s) {
    write_u64(os, s.size());
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}
void write_matrix(std::ostream& os, const Matrix& m) {
    write_u64(os, m.rows());
    write_u64(os, m.cols());
    os.write(reinterpret_cast<const char*>(m.data()),
             static_cast<std::streamsize>(m.size() * sizeof(double)));
}

std::uint64_t read_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return v;
}
double read_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return v;
}
std::string read_string(std::istream& is) {
    const auto n = read_u64(is);
    std::string s(n, '\0');
    is.read(s.data(), static_cast<std::streamsize>(n));
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return s;
}
void read_matrix_into(std::istream& is, Matrix& m) {
    const auto rows = read_u64(is);
    const auto cols = read_u64(is);
    if (rows != m.rows() || cols != m.cols())
        throw std::runtime_error("checkpoint: tensor shape mismatch (file [" +
                                 std::to_string(rows) + "x" + std::to_string(cols) +
                                 "], model " + m.shape_str() + ")");
    is.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
    if (!is) throw std::runtime_error("checkpoint: truncated tensor data");
}

void write_config(std::ostream& os, const GanConfig& c) {
    write_u64(os, c.latent_dim);
    write_u64(os, c.feature_dim);
    write_u64(os, c.g_widths.size());
    for (auto w : c.g_widths) write_u64(os, w);
    write_u64(os, c.d_widths.size());
    for (auto w : c.d_widths) write_u64(os, w);
    write_u64(os, c.batch_size);
    write_u64(os, c.epochs);
    write_f64(os, c.optimizer.lr);
    write_f64(os, c.optimizer.beta1);
    write_f64(os, c.optimizer.beta2);
    write_f64(os, c.optimizer.epsilon);
}

GanConfig read_config(std::istream& is) {
    GanConfig c;
    c.latent_dim = read_u64(is);
    c.feature_dim = read_u64(is);
    c.g_widths.resize(read_u64(is));
    for (auto& w : c.g_widths) w = read_u64(is);
    c.d_widths.resize(read_u64(is));
    for (auto& w : c.d_widths) w = read_u64(is);
    c.batch_size = read_u64(is);
    c.epochs = read_u64(is);
    c.optimizer.lr = read_f64(is);
    c.optimizer.beta1 = read_f64(is);
    c.optimizer.beta2 = read_f64(is);
    c.optimizer.epsilon = read_f64(is);
    return c;
}

std::vector<ParamRef> network_buffers(Network& net) {
    std::vector<ParamRef> out;
    for (std::size_t i = 0; i < net.layer_count(); ++i)
        for (auto& b : net.layer(i).buffers()) out.push_back(b);
    return out;
}

void write_state(std::ostream& os, const TrainState& s) {
    for (auto w : s.model_rng.state()) write_u64(os, w);
    for (auto w : s.data_rng.state()) write_u64(os, w);
    write_u64(os, s.epoch);
    write_f64(os, s.wall_seconds);
}

TrainState read_state(std::istream& is) {
    TrainState s;
    std::array<std::uint64_t, 4> a{};
    for (auto& w : a) w = read_u64(is);
    s.model_rng.set_state(a);
    for (auto& w : a) w = read_u64(is);
    s.data_rng.set_state(a);
    s.epoch = read_u64(is);
    s.wall_seconds = read_f64(is);
    return s;
}

void write_adam(std::ostream& os, AdamState& opt) {
    write_u64(os, opt.t());
    write_u64(os, opt.moments1().size());
    for (auto& m : opt.moments1()) write_matrix(os, m);
    for (auto& v : opt.moments2()) write_matrix(os, v);
}

void read_adam(std::istream& is, AdamState& opt) {
    opt.set_t(read_u64(is));
    const auto n = read_u64(is);
    if (n != opt.moments1().size())
        throw std::runtime_error("checkpoint: optimizer tensor count mismatch");
    for (auto& m : opt.moments1()) read_matrix_into(is, m);
    for (auto& v : opt.moments2()) read_matrix_into(is, v);
}

template <typename Model>
void save_model(const std::string& path, const std::string& kind, Model& model,
                const TrainState& state) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot write " + path);
    os.write(kMagic, sizeof(kMagic));
    write_string(os, kind);
    write_config(os, model.config());

    auto g_params = model.generator().params();
    auto d_params = model.discriminator().params();
    write_u64(os, g_params.size());
    for (auto& p : g_params) write_matrix(os, *p.value);
    write_u64(os, d_params.size());
    for (auto& p : d_params) write_matrix(os, *p.value);

    auto g_buf = network_buffers(model.generator().net);
    auto d_buf = network_buffers(model.discriminator().trunk);
    write_u64(os, g_buf.size());
    for (auto& b : g_buf) write_matrix(os, *b.value);
    write_u64(os, d_buf.size());
    for (auto& b : d_buf) write_matrix(os, *b.value);

    write_adam(os, model.g_optimizer());
    write_adam(os, model.d_optimizer());
    write_state(os, state);
    if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

std::ifstream open_checked(const std::string& path, std::string* kind_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    *kind_out = read_string(is);
    return is;
}

template <typename Model>
TrainState load_model(std::istream& is, Model& model) {
    auto g_params = model.generator().params();
    auto d_params = model.discriminator().params();
    if (read_u64(is) != g_params.size())
        throw std::runtime_error("checkpoint: generator tensor count mismatch");
    for (auto& p : g_params) read_matrix_into(is, *p.value);
    if (read_u64(is) != d_params.size())
        throw std::runtime_error("checkpoint: discriminator tensor count mismatch");
    for (auto& p : d_params) read_matrix_into(is, *p.value);

    auto g_buf = network_buffers(model.generator().net);
    auto d_buf = network_buffers(model.discriminator().trunk);
    if (read_u64(is) != g_buf.size())
        throw std::runtime_error("checkpoint: generator buffer count mismatch");
    for (auto& b : g_buf) read_matrix_into(is, *b.value);
    if (read_u64(is) != d_buf.size())
        throw std::runtime_error("checkpoint: discriminator buffer count mismatch");
    for (auto& b : d_buf) read_matrix_into(is, *b.value);

    read_adam(is, model.g_optimizer());
    read_adam(is, model.d_optimizer());
    return read_state(is);
}

} // namespace

void save_evagan_checkpoint(const std::string& path, EvaganModel& model,
                            const TrainState& state) {
    save_model(path, "evagan", model, state);
}

void save_acgan_checkpoint(const std::string& path, AcganModel& model, const TrainState& state) {
    save_model(path, "acgan", model, state);
}

std::string peek_checkpoint_kind(const std::string& path) {
    std::string kind;
    open_checked(path, &kind);
    return kind;
}

LoadedEvagan load_evagan_checkpoint(const std::string& path) {
    std::string kind;
    auto is = open_checked(path, &kind);
    if (kind != "evagan")
        throw std::runtime_error("checkpoint: expected kind 'evagan', found '" + kind + "'");
    const GanConfig cfg = read_config(is);
    Rng scratch(0);
    LoadedEvagan out{std::make_unique<EvaganModel>(cfg, scratch), TrainState{}};
    out.state = load_model(is, *out.model);
    return out;
}

LoadedAcgan load_acgan_checkpoint(const std::string& path) {
    std::string kind;
    auto is = open_checked(path, &kind);
    if (kind != "acgan")
        throw std::runtime_error("checkpoint: expected kind 'acgan', found '" + kind + "'");
    const GanConfig cfg = read_config(is);
    Rng scratch(0);
    LoadedAcgan out{std::make_unique<AcganModel>(cfg, scratch), TrainState{}};
    out.state = load_model(is, *out.model);
    return out;
}

} // namespace evagan
