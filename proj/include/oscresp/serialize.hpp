// serialize.hpp - CSV and JSON records for signals, kernels and kernel families

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "oscresp/kernels.hpp"
#include "oscresp/spectral.hpp"

namespace oscresp::io {

using json = nlohmann::json;

// Columns index,t,re,im; 17 significant digits.
template <class Tag>
void write_csv(std::ostream& os, const GridSeries<Tag>& s);
// Reads what write_csv wrote; the grid is rebuilt from the t column.
template <class Tag>
GridSeries<Tag> read_csv(std::istream& is);

// {n, dt, t0, values: [[re, im], ...]}
template <class Tag>
json to_json(const GridSeries<Tag>& s);
template <class Tag>
GridSeries<Tag> series_from_json(const json& j);

// [{mu, mu_prime, r, r_prime, kernel: {...}}, ...]
json family_to_json(const KernelFamily& f);

std::string read_file(const std::string& path);
// Creates parent directories; errors carry the path.
void write_file(const std::string& path, const std::string& contents);

}  // namespace oscresp::io
