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

#include "wsrp/dataset.hpp"

#include "wsrp/training.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace wsrp;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("wsrp_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("dataset round trips through the JSONL format", "[dataset]") {
    TempDir tmp;
    const Dataset d = generate_dataset(99, 4, 3, 10, Geometry{}, 5.0, 1.5, WeightLaw::dirichlet);
    const std::string path = tmp.file("data.jsonl");
    save_dataset(d, path);
    const Dataset back = load_dataset(path);

    REQUIRE(back.n == d.n);
    REQUIRE(back.k == d.k);
    REQUIRE(back.seed == d.seed);
    REQUIRE(back.snr_edge_db == d.snr_edge_db);
    REQUIRE(back.power_budget == d.power_budget);
    REQUIRE(back.weight_law == d.weight_law);
    REQUIRE(back.geometry.cell_radius_m == d.geometry.cell_radius_m);
    REQUIRE(back.samples.size() == d.samples.size());
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        REQUIRE((back.samples[i].H - d.samples[i].H).norm() == 0.0);
        REQUIRE(back.samples[i].noise_power == d.samples[i].noise_power);
        REQUIRE(back.samples[i].power_budget == d.samples[i].power_budget);
        REQUIRE((back.samples[i].alpha - d.samples[i].alpha).norm() == 0.0);
        REQUIRE((back.samples[i].distances_m - d.samples[i].distances_m).norm() == 0.0);
    }
}

TEST_CASE("identical seeds write identical dataset files", "[dataset]") {
    TempDir tmp;
    const Dataset a = generate_dataset(7, 4, 2, 16, Geometry{}, 0.0, 1.0, WeightLaw::dirichlet);
    const Dataset b = generate_dataset(7, 4, 2, 16, Geometry{}, 0.0, 1.0, WeightLaw::dirichlet);
    save_dataset(a, tmp.file("a.jsonl"));
    save_dataset(b, tmp.file("b.jsonl"));
    REQUIRE(file_fingerprint(tmp.file("a.jsonl")) == file_fingerprint(tmp.file("b.jsonl")));

    const Dataset c = generate_dataset(8, 4, 2, 16, Geometry{}, 0.0, 1.0, WeightLaw::dirichlet);
    save_dataset(c, tmp.file("c.jsonl"));
    REQUIRE(file_fingerprint(tmp.file("a.jsonl")) != file_fingerprint(tmp.file("c.jsonl")));
}

TEST_CASE("dataset loader rejects malformed files", "[dataset]") {
    TempDir tmp;
    const std::string path = tmp.file("bad.jsonl");
    {
        std::ofstream out(path);
        out << "{\"format\":\"other\"}\n";
    }
    REQUIRE_THROWS_AS(load_dataset(path), std::invalid_argument);
    REQUIRE_THROWS_AS(load_dataset(tmp.file("missing.jsonl")), std::invalid_argument);
}

TEST_CASE("string fingerprint is stable", "[dataset]") {
    REQUIRE(string_fingerprint("abc") == string_fingerprint("abc"));
    REQUIRE(string_fingerprint("abc") != string_fingerprint("abd"));
    REQUIRE(string_fingerprint("").size() == 16);
}
