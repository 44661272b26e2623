// SPDX-License-Identifier: Apache-2.0
//
// uwbnbi - narrow-band interference laboratory for ultra-wideband links
// Copyright (C) 2026 The uwbnbi Authors
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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "test_util.hpp"
#include "uwbnbi/error.hpp"
#include "uwbnbi/iq_capture.hpp"

using namespace uwbnbi;
namespace fs = std::filesystem;

TEST_SUITE("iq_capture") {

TEST_CASE("export then import restores every sample and the metadata") {
    test::TempDir dir("iq_roundtrip");
    IQCapture cap;
    cap.sample_rate_hz = 200e6;
    cap.center_freq_hz = 3.9936e9;
    cap.cal_offset_db = -12.5;
    cap.start_time_s = 0.25;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<float> u(-0.7f, 0.7f);
    for (int i = 0; i < 4097; ++i) cap.samples.emplace_back(u(rng), u(rng));

    const auto path = dir.path() / "cap.iq";
    export_iq(cap, path);
    CHECK(fs::file_size(path) == cap.samples.size() * 8);
    CHECK(fs::exists(dir.path() / "cap.json"));

    const IQCapture back = import_iq(path);
    CHECK(back.samples == cap.samples);
    CHECK(back.sample_rate_hz == cap.sample_rate_hz);
    CHECK(back.center_freq_hz == cap.center_freq_hz);
    CHECK(back.cal_offset_db == cap.cal_offset_db);
    CHECK(back.start_time_s == cap.start_time_s);

    std::ifstream side(dir.path() / "cap.json");
    const auto meta = nlohmann::json::parse(side);
    CHECK(meta.at("sample_count").get<std::size_t>() == 4097);
}

TEST_CASE("payload is interleaved little-endian float32") {
    test::TempDir dir("iq_layout");
    IQCapture cap;
    cap.sample_rate_hz = 1e6;
    cap.samples = {{0.5f, -0.25f}};
    export_iq(cap, dir.path() / "one.iq");
    std::ifstream in(dir.path() / "one.iq", std::ios::binary);
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    // 0.5f = 0x3f000000, -0.25f = 0xbe800000
    CHECK(b[3] == 0x3f);
    CHECK(b[0] == 0x00);
    CHECK(b[7] == 0xbe);
    CHECK(b[6] == 0x80);
}

TEST_CASE("truncated payload names expected and actual length") {
    test::TempDir dir("iq_trunc");
    IQCapture cap;
    cap.sample_rate_hz = 1e6;
    cap.samples.assign(100, {0.1f, 0.1f});
    const auto path = dir.path() / "t.iq";
    export_iq(cap, path);
    fs::resize_file(path, 797);
    try {
        (void)import_iq(path);
        FAIL("import of a truncated payload succeeded");
    } catch (const IoError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("797") != std::string::npos);
        CHECK(msg.find("800") != std::string::npos);
    }
}

TEST_CASE("sidecar with zero sample rate is a validation error") {
    test::TempDir dir("iq_rate0");
    IQCapture cap;
    cap.sample_rate_hz = 1e6;
    cap.samples.assign(10, {});
    const auto path = dir.path() / "r.iq";
    export_iq(cap, path);
    std::ifstream in(dir.path() / "r.json");
    auto meta = nlohmann::json::parse(in);
    in.close();
    meta["sample_rate_hz"] = 0.0;
    std::ofstream(dir.path() / "r.json") << meta.dump();
    CHECK_THROWS_AS((void)import_iq(path), ValidationError);
}

TEST_CASE("missing sidecar is reported") {
    test::TempDir dir("iq_noside");
    std::ofstream(dir.path() / "lone.iq", std::ios::binary) << "12345678";
    CHECK_THROWS_AS((void)import_iq(dir.path() / "lone.iq"), IoError);
}

TEST_CASE("validate rejects non-finite and over-range samples") {
    IQCapture cap;
    cap.sample_rate_hz = 1e6;
    cap.samples = {{0.5f, 0.5f}};
    CHECK_NOTHROW(validate(cap));
    cap.samples.push_back({1.0f, 0.5f});
    CHECK_THROWS_AS(validate(cap), ValidationError);
    cap.samples.back() = {std::nanf(""), 0.0f};
    CHECK_THROWS_AS(validate(cap), ValidationError);
    cap.samples.pop_back();
    cap.sample_rate_hz = -1.0;
    CHECK_THROWS_AS(validate(cap), ValidationError);
}

TEST_CASE("full scale follows the calibration offset") {
    IQCapture cap;
    cap.cal_offset_db = 10.0;
    CHECK(cap.full_scale_mw() == doctest::Approx(10.0).epsilon(1e-12));
}

}
