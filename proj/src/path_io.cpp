#include "lowbessel/path_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lowbessel {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("csv: bad number '" + s + "'");
    return v;
}

std::string chomp(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
    return os;
}

std::ifstream open_in(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + file.string());
    return is;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_path_csv(std::ostream& os, const SamplePath& path) {
    const bool noise = path.has_noise();
    os << (noise ? "t,value,dW\n" : "t,value\n");
    for (std::size_t i = 0; i < path.size(); ++i) {
        os << format_double(path.grid.time(i)) << ',' << format_double(path.values[i]);
        if (noise) {
            os << ',';
            if (i > 0) os << format_double(path.noise[i - 1]);
        }
        os << '\n';
    }
}

SamplePath read_path_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
    line = chomp(line);
    bool noise;
    if (line == "t,value") noise = false;
    else if (line == "t,value,dW") noise = true;
    else throw std::invalid_argument("csv: unexpected header '" + line + "'");

    std::vector<double> t, v, dw;
    while (std::getline(is, line)) {
        line = chomp(line);
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != (noise ? 3u : 2u)) throw std::invalid_argument("csv: wrong column count");
        t.push_back(parse(cells[0]));
        v.push_back(parse(cells[1]));
        if (noise) {
            if (t.size() == 1) {
                if (!cells[2].empty()) throw std::invalid_argument("csv: first dW must be empty");
            } else {
                dw.push_back(parse(cells[2]));
            }
        }
    }
    return SamplePath(TimeGrid::from_nodes(std::move(t)), std::move(v), std::move(dw));
}

void write_path_csv(const std::filesystem::path& file, const SamplePath& path) {
    auto os = open_out(file);
    write_path_csv(os, path);
}

SamplePath read_path_csv(const std::filesystem::path& file) {
    auto is = open_in(file);
    return read_path_csv(is);
}

void write_ensemble_csv(const std::filesystem::path& file, std::span<const SamplePath> paths,
                        EnsembleLayout layout) {
    if (paths.empty()) throw std::invalid_argument("write_ensemble_csv: empty ensemble");
    if (layout == EnsembleLayout::file_per_path) {
        const auto dir = file.parent_path();
        const auto stem = file.stem().string();
        for (std::size_t k = 0; k < paths.size(); ++k)
            write_path_csv(dir / (stem + "_" + std::to_string(k) + ".csv"), paths[k]);
        return;
    }
    const TimeGrid& grid = paths.front().grid;
    for (const auto& p : paths)
        if (!(p.grid == grid)) throw std::invalid_argument("write_ensemble_csv: paths on different grids");
    auto os = open_out(file);
    os << 't';
    for (std::size_t k = 0; k < paths.size(); ++k) os << ",path" << k;
    os << '\n';
    for (std::size_t i = 0; i <= grid.n_steps(); ++i) {
        os << format_double(grid.time(i));
        for (const auto& p : paths) os << ',' << format_double(p.values[i]);
        os << '\n';
    }
}

std::vector<SamplePath> read_ensemble_csv(const std::filesystem::path& file) {
    auto is = open_in(file);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("csv: empty ensemble file");
    const auto header = split(chomp(line));
    if (header.size() < 2 || header[0] != "t") throw std::invalid_argument("csv: bad ensemble header");
    const std::size_t n = header.size() - 1;
    std::vector<double> t;
    std::vector<std::vector<double>> cols(n);
    while (std::getline(is, line)) {
        line = chomp(line);
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != n + 1) throw std::invalid_argument("csv: wrong column count");
        t.push_back(parse(cells[0]));
        for (std::size_t k = 0; k < n; ++k) cols[k].push_back(parse(cells[k + 1]));
    }
    const auto grid = TimeGrid::from_nodes(std::move(t));
    std::vector<SamplePath> out;
    out.reserve(n);
    for (auto& c : cols) out.emplace_back(grid, std::move(c));
    return out;
}

}  // namespace lowbessel
