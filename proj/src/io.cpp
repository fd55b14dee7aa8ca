#include "binn/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "binn/errors.hpp"

namespace binn {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw NumericsError("cannot write file '" + path + "'");
    return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw NumericsError("cannot read file '" + path + "'");
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

} // namespace

void write_boundary_state_csv(const std::string& path, const BoundaryMesh& mesh,
                              const BoundaryState& state) {
    auto out = open_out(path);
    out << "node,x,y,nx,ny,u1,u2,t1,t2,provenance\n";
    for (int n = 0; n < mesh.node_count(); ++n) {
        const CollocationNode& node = mesh.nodes[n];
        std::string prov;
        prov += state.u_prescribed[2 * n] ? 'p' : 's';
        prov += state.u_prescribed[2 * n + 1] ? 'p' : 's';
        prov += state.t_prescribed[2 * n] ? 'p' : 's';
        prov += state.t_prescribed[2 * n + 1] ? 'p' : 's';
        out << n << ',' << fmt(node.position.x) << ',' << fmt(node.position.y) << ','
            << fmt(node.normal.x) << ',' << fmt(node.normal.y) << ',' << fmt(state.u[2 * n]) << ','
            << fmt(state.u[2 * n + 1]) << ',' << fmt(state.t[2 * n]) << ','
            << fmt(state.t[2 * n + 1]) << ',' << prov << '\n';
    }
}

std::vector<BoundaryStateRow> read_boundary_state_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("node,", 0) != 0)
        throw NumericsError("boundary-state csv '" + path + "': bad header");
    std::vector<BoundaryStateRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 10)
            throw NumericsError("boundary-state csv '" + path + "': expected 10 columns");
        BoundaryStateRow r;
        r.node = std::stoi(cells[0]);
        r.position = {std::stod(cells[1]), std::stod(cells[2])};
        r.normal = {std::stod(cells[3]), std::stod(cells[4])};
        r.u1 = std::stod(cells[5]);
        r.u2 = std::stod(cells[6]);
        r.t1 = std::stod(cells[7]);
        r.t2 = std::stod(cells[8]);
        r.provenance = cells[9];
        rows.push_back(r);
    }
    return rows;
}

void write_loss_history_csv(const std::string& path, const std::vector<TrainRecord>& history) {
    auto out = open_out(path);
    out << "iteration,loss,wall_seconds\n";
    for (const auto& rec : history)
        out << rec.iteration << ',' << fmt(rec.loss) << ',' << fmt(rec.wall_seconds) << '\n';
}

std::vector<TrainRecord> read_loss_history_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("iteration,", 0) != 0)
        throw NumericsError("loss-history csv '" + path + "': bad header");
    std::vector<TrainRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 3)
            throw NumericsError("loss-history csv '" + path + "': expected 3 columns");
        out.push_back({std::stoi(cells[0]), std::stod(cells[1]), std::stod(cells[2])});
    }
    return out;
}

void write_field_grid_csv(const std::string& path, const FieldGrid& grid) {
    auto out = open_out(path);
    out << "x,y,inside,u1,u2,s11,s22,s12,err_u1,err_u2\n";
    for (const auto& s : grid.samples)
        out << fmt(s.p.x) << ',' << fmt(s.p.y) << ',' << (s.inside ? 1 : 0) << ',' << fmt(s.u1)
            << ',' << fmt(s.u2) << ',' << fmt(s.s11) << ',' << fmt(s.s22) << ',' << fmt(s.s12)
            << ',' << fmt(s.err_u1) << ',' << fmt(s.err_u2) << '\n';
}

FieldGrid read_field_grid_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y,inside", 0) != 0)
        throw NumericsError("field-grid csv '" + path + "': bad header");
    FieldGrid grid;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 10)
            throw NumericsError("field-grid csv '" + path + "': expected 10 columns");
        FieldSample s;
        s.p = {std::stod(cells[0]), std::stod(cells[1])};
        s.inside = cells[2] == "1";
        s.u1 = std::stod(cells[3]);
        s.u2 = std::stod(cells[4]);
        s.s11 = std::stod(cells[5]);
        s.s22 = std::stod(cells[6]);
        s.s12 = std::stod(cells[7]);
        s.err_u1 = std::stod(cells[8]);
        s.err_u2 = std::stod(cells[9]);
        grid.samples.push_back(s);
    }
    return grid;
}

void dump_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    auto out = open_out(path, std::ios::binary);
    const char magic[8] = {'B', 'I', 'N', 'N', 'M', 'A', 'T', '1'};
    out.write(magic, 8);
    std::uint64_t rows = m.rows(), cols = m.cols();
    out.write(reinterpret_cast<const char*>(&rows), 8);
    out.write(reinterpret_cast<const char*>(&cols), 8);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double v = m(i, j);
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
}

Eigen::MatrixXd load_matrix(const std::string& path) {
    auto in = open_in(path, std::ios::binary);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "BINNMAT1", 8) != 0)
        throw NumericsError("matrix file '" + path + "': bad magic");
    std::uint64_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), 8);
    in.read(reinterpret_cast<char*>(&cols), 8);
    Eigen::MatrixXd m(rows, cols);
    for (std::uint64_t i = 0; i < rows; ++i)
        for (std::uint64_t j = 0; j < cols; ++j) {
            double v;
            in.read(reinterpret_cast<char*>(&v), 8);
            m(i, j) = v;
        }
    if (!in) throw NumericsError("matrix file '" + path + "': truncated");
    return m;
}

void save_network(const std::string& path, const Network& net) {
    nlohmann::json j;
    j["format"] = "binn-network";
    j["version"] = 1;
    j["widths"] = net.widths;
    j["activation"] = activation_name(net.activation);
    j["output"] = net.mode == OutputMode::Displacement ? "displacement" : "direct_traction";
    j["in_shift"] = {net.in_shift.x, net.in_shift.y};
    j["in_scale"] = {net.in_scale.x, net.in_scale.y};
    j["out_scale"] = std::vector<double>(net.out_scale.data(),
                                         net.out_scale.data() + net.out_scale.size());
    Eigen::VectorXd p = net.flatten_params();
    j["params"] = std::vector<double>(p.data(), p.data() + p.size());
    auto out = open_out(path);
    out << j.dump(1) << '\n';
}

Network load_network(const std::string& path) {
    auto in = open_in(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw NumericsError("network checkpoint '" + path + "': " + e.what());
    }
    if (j.value("format", "") != "binn-network" || j.value("version", 0) != 1)
        throw NumericsError("network checkpoint '" + path + "': unrecognized format");
    std::vector<int> widths = j.at("widths").get<std::vector<int>>();
    Activation act = activation_from_name(j.at("activation").get<std::string>());
    OutputMode mode = j.at("output").get<std::string>() == "displacement"
                          ? OutputMode::Displacement
                          : OutputMode::DirectTraction;
    Network net = init_network(widths, act, 0, mode);
    net.in_shift = {j.at("in_shift")[0].get<double>(), j.at("in_shift")[1].get<double>()};
    net.in_scale = {j.at("in_scale")[0].get<double>(), j.at("in_scale")[1].get<double>()};
    auto os = j.at("out_scale").get<std::vector<double>>();
    net.out_scale = Eigen::Map<Eigen::VectorXd>(os.data(), os.size());
    auto params = j.at("params").get<std::vector<double>>();
    net.unflatten_params(Eigen::Map<Eigen::VectorXd>(params.data(), params.size()));
    return net;
}

} // namespace binn
