// serialize.cpp - CSV and JSON records for signals, kernels and kernel families

#include "oscresp/serialize.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace oscresp::io {

namespace {

double parse_cell(const std::string& cell) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) throw std::runtime_error("malformed CSV number '" + cell + "'");
    return v;
}

}  // namespace

template <class Tag>
void write_csv(std::ostream& os, const GridSeries<Tag>& s) {
    os << "index,t,re,im\n";
    os << std::setprecision(17);
    for (std::size_t k = 0; k < s.size(); ++k) {
        os << k << ',' << s.grid.time(k) << ',' << s[k].real() << ',' << s[k].imag() << '\n';
    }
}

template <class Tag>
GridSeries<Tag> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "index,t,re,im") throw std::runtime_error("CSV header must be index,t,re,im");
    std::vector<double> times;
    std::vector<cd> values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell[4];
        for (auto& c : cell) {
            if (!std::getline(row, c, ',')) throw std::runtime_error("CSV row has fewer than 4 columns: " + line);
        }
        if (std::stoul(cell[0]) != values.size()) throw std::runtime_error("CSV index column out of sequence");
        times.push_back(parse_cell(cell[1]));
        values.emplace_back(parse_cell(cell[2]), parse_cell(cell[3]));
    }
    if (values.size() < 4) throw std::runtime_error("CSV series needs at least 4 rows");
    TimeGrid g = make_grid(values.size(), (times.back() - times.front()) / static_cast<double>(times.size() - 1));
    g.t0 = times.front();
    // The quotient can be a few ulps off the writer's dt; pick the neighbour that reproduces every t.
    auto reproduces = [&](const TimeGrid& cand) {
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (cand.time(k) != times[k]) return false;
        }
        return true;
    };
    TimeGrid below = g;
    TimeGrid above = g;
    for (int step = 0; step < 16 && !reproduces(g); ++step) {
        below.dt = std::nextafter(below.dt, 0.0);
        above.dt = std::nextafter(above.dt, 2.0 * above.dt);
        if (reproduces(below)) g = below;
        else if (reproduces(above)) g = above;
    }
    return GridSeries<Tag>(g, Eigen::Map<Eigen::VectorXcd>(values.data(), static_cast<Eigen::Index>(values.size())));
}

template <class Tag>
json to_json(const GridSeries<Tag>& s) {
    json values = json::array();
    for (std::size_t k = 0; k < s.size(); ++k) values.push_back({s[k].real(), s[k].imag()});
    return json{{"n", s.grid.n}, {"dt", s.grid.dt}, {"t0", s.grid.t0}, {"values", std::move(values)}};
}

template <class Tag>
GridSeries<Tag> series_from_json(const json& j) {
    const TimeGrid g{j.at("n").get<std::size_t>(), j.at("dt").get<double>(), j.at("t0").get<double>()};
    const auto& values = j.at("values");
    if (values.size() != g.n) throw std::runtime_error("JSON series length does not match n");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(g.n));
    for (std::size_t k = 0; k < g.n; ++k) {
        v(static_cast<Eigen::Index>(k)) = cd{values[k].at(0).get<double>(), values[k].at(1).get<double>()};
    }
    return GridSeries<Tag>(g, std::move(v));
}

template void write_csv(std::ostream&, const SampledSignal&);
template void write_csv(std::ostream&, const Kernel&);
template SampledSignal read_csv<SignalTag>(std::istream&);
template Kernel read_csv<KernelTag>(std::istream&);
template json to_json(const SampledSignal&);
template json to_json(const Kernel&);
template SampledSignal series_from_json<SignalTag>(const json&);
template Kernel series_from_json<KernelTag>(const json&);

json family_to_json(const KernelFamily& f) {
    json out = json::array();
    for (std::size_t mu = 0; mu < f.labels(); ++mu) {
        for (std::size_t r = 0; r < f.points(); ++r) {
            for (std::size_t mp = 0; mp < f.labels(); ++mp) {
                for (std::size_t rp = 0; rp < f.points(); ++rp) {
                    out.push_back({{"mu", mu}, {"mu_prime", mp}, {"r", r}, {"r_prime", rp},
                                   {"kernel", to_json(f.at(mu, r, mp, rp))}});
                }
            }
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory for '" + path + "': " + ec.message());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace oscresp::io
