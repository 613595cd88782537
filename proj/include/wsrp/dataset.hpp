// SPDX-License-Identifier: Apache-2.0
//
// wsrp - equivariant precoder learning and simulation toolkit
// Copyright (C) 2026 the wsrp contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Dataset container and its JSON-lines file format.
//
// A dataset file is one JSON object per line. The first line is a header:
//   {"format":"wsrp.dataset","version":1,"n":..,"k":..,"count":..,"seed":..,
//    "snr_edge_db":..,"power_budget":..,"weight_law":"..","geometry":{..}}
// followed by `count` sample lines:
//   {"h":[..],"noise_power":..,"power_budget":..,"alpha":[..],
//    "distances_m":[..]}
// where "h" holds the N x K complex channel as 2*N*K doubles, column-major
// with real/imaginary parts interleaved. Doubles are serialized with 17
// significant digits and round-trip exactly.

#ifndef WSRP_DATASET_HPP
#define WSRP_DATASET_HPP

#include "wsrp/channel.hpp"
#include "wsrp/common.hpp"
#include "wsrp/weights.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace wsrp {

using Json = nlohmann::json;

struct Sample {
    CMat H;
    double noise_power = 0.0;
    double power_budget = 0.0;
    RVec alpha;
    RVec distances_m;
};

struct Dataset {
    int n = 0;
    int k = 0;
    std::uint64_t seed = 0;
    double snr_edge_db = 0.0;
    double power_budget = 1.0;
    WeightLaw weight_law = WeightLaw::dirichlet;
    Geometry geometry;
    std::vector<Sample> samples;
};

inline Json to_json(const Geometry& g) {
    return Json{{"cell_radius_m", g.cell_radius_m},
                {"min_distance_m", g.min_distance_m},
                {"pathloss_1m_db", g.pathloss_1m_db},
                {"pathloss_exponent_coeff", g.pathloss_exponent_coeff}};
}

inline Geometry geometry_from_json(const Json& j) {
    Geometry g;
    g.cell_radius_m = j.at("cell_radius_m").get<double>();
    g.min_distance_m = j.at("min_distance_m").get<double>();
    g.pathloss_1m_db = j.at("pathloss_1m_db").get<double>();
    g.pathloss_exponent_coeff = j.at("pathloss_exponent_coeff").get<double>();
    return g;
}

inline Json to_json(const RVec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v(i));
    return a;
}

inline RVec rvec_from_json(const Json& j) {
    RVec v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

// Column-major, interleaved real/imaginary doubles.
inline Json complex_matrix_to_json(const CMat& m) {
    Json a = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            a.push_back(m(i, j).real());
            a.push_back(m(i, j).imag());
        }
    return a;
}

inline CMat complex_matrix_from_json(const Json& a, int rows, int cols) {
    require(static_cast<int>(a.size()) == 2 * rows * cols,
            "dataset: complex matrix payload has the wrong length");
    CMat m(rows, cols);
    std::size_t at = 0;
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double re = a.at(at++).get<double>();
            const double im = a.at(at++).get<double>();
            m(i, j) = Complex(re, im);
        }
    return m;
}

inline void save_dataset(const Dataset& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "save_dataset: cannot open " + path);
    Json header{{"format", "wsrp.dataset"},
                {"version", 1},
                {"n", d.n},
                {"k", d.k},
                {"count", d.samples.size()},
                {"seed", d.seed},
                {"snr_edge_db", d.snr_edge_db},
                {"power_budget", d.power_budget},
                {"weight_law", to_string(d.weight_law)},
                {"geometry", to_json(d.geometry)}};
    out << header.dump() << "\n";
    for (const Sample& s : d.samples) {
        Json line{{"h", complex_matrix_to_json(s.H)},
                  {"noise_power", s.noise_power},
                  {"power_budget", s.power_budget},
                  {"alpha", to_json(s.alpha)},
                  {"distances_m", to_json(s.distances_m)}};
        out << line.dump() << "\n";
    }
    require(out.good(), "save_dataset: write to " + path + " failed");
}

inline Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "load_dataset: cannot open " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "load_dataset: empty file " + path);
    const Json header = Json::parse(line);
    require(header.at("format") == "wsrp.dataset", "load_dataset: not a dataset file");
    require(header.at("version") == 1, "load_dataset: unsupported version");

    Dataset d;
    d.n = header.at("n").get<int>();
    d.k = header.at("k").get<int>();
    d.seed = header.at("seed").get<std::uint64_t>();
    d.snr_edge_db = header.at("snr_edge_db").get<double>();
    d.power_budget = header.at("power_budget").get<double>();
    d.weight_law = weight_law_from_string(header.at("weight_law").get<std::string>());
    d.geometry = geometry_from_json(header.at("geometry"));
    const auto count = header.at("count").get<std::size_t>();
    d.samples.reserve(count);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const Json j = Json::parse(line);
        Sample s;
        s.H = complex_matrix_from_json(j.at("h"), d.n, d.k);
        s.noise_power = j.at("noise_power").get<double>();
        s.power_budget = j.at("power_budget").get<double>();
        s.alpha = rvec_from_json(j.at("alpha"));
        s.distances_m = rvec_from_json(j.at("distances_m"));
        d.samples.push_back(std::move(s));
    }
    require(d.samples.size() == count, "load_dataset: sample count does not match the header");
    return d;
}

// FNV-1a content fingerprint (cache keying, not cryptographic).
inline std::uint64_t fnv1a(const char* data, std::size_t len,
                           std::uint64_t h = 14695981039346656037ULL) {
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string fingerprint_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline std::string string_fingerprint(const std::string& s) {
    return fingerprint_hex(fnv1a(s.data(), s.size()));
}

inline std::string file_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "file_fingerprint: cannot open " + path);
    std::uint64_t h = 14695981039346656037ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
        if (in.eof())
            break;
    }
    return fingerprint_hex(h);
}

} // namespace wsrp

#endif // WSRP_DATASET_HPP
