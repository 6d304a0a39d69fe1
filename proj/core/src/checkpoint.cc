// Copyright 2026 The evofg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evofg/checkpoint.h"

#include <array>
#include <bit>
#include <cstring>
#include <string>

#include <json.hpp>

#include "evofg/error.h"
#include "evofg/io.h"

namespace evofg {

namespace {

using nlohmann::json;

constexpr std::array<char, 8> kMagic = {'E', 'V', 'O', 'F', 'G', 'C', 'K', 'P'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw ParseError(std::string("truncated checkpoint while reading ") + what, 0);
  }
  return v;
}

void write_file(const std::filesystem::path& path, const json& header, const ParameterList& params) {
  auto out = io::open_output(path, std::ios::binary);
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kCheckpointVersion);
  const std::string text = header.dump();
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& p : params) {
    put_u32(out, static_cast<std::uint32_t>(p.value.rows()));
    put_u32(out, static_cast<std::uint32_t>(p.value.cols()));
    out.write(reinterpret_cast<const char*>(p.value.data()),
              static_cast<std::streamsize>(p.value.size() * sizeof(double)));
  }
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

struct RawCheckpoint {
  json header;
  ParameterList params;
};

RawCheckpoint read_file(const std::filesystem::path& path, const char* kind) {
  auto in = io::open_input(path, std::ios::binary);
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ParseError(path.string() + " is not an evofg checkpoint", 0);
  }
  const std::uint32_t version = get_u32(in, "version");
  if (version != kCheckpointVersion) {
    throw ParseError("unsupported checkpoint version " + std::to_string(version), 0);
  }
  const std::uint32_t len = get_u32(in, "header length");
  std::string text(len, '\0');
  if (!in.read(text.data(), len)) throw ParseError("truncated checkpoint header", 0);
  RawCheckpoint raw;
  try {
    raw.header = json::parse(text);
    if (raw.header.at("kind").get<std::string>() != kind) {
      throw ParseError(path.string() + " is not a " + kind + " checkpoint", 0);
    }
    for (const auto& name : raw.header.at("tensors")) {
      const std::uint32_t rows = get_u32(in, "tensor rows");
      const std::uint32_t cols = get_u32(in, "tensor cols");
      Matrix m(rows, cols);
      if (!in.read(reinterpret_cast<char*>(m.data()),
                   static_cast<std::streamsize>(m.size() * sizeof(double)))) {
        throw ParseError("truncated tensor " + name.get<std::string>(), 0);
      }
      raw.params.add(name.get<std::string>(), std::move(m));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad checkpoint header: ") + e.what(), 0);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ParseError("trailing bytes after the last tensor in " + path.string(), 0);
  }
  return raw;
}

json tensor_names(const ParameterList& params) {
  json names = json::array();
  for (const auto& p : params) names.push_back(p.name);
  return names;
}

}  // namespace

void save_expert(const ExpertModel& m, const std::filesystem::path& path) {
  json h = {{"kind", "expert"},
            {"arch", std::string(to_string(m.arch))},
            {"dims", {{"d", m.dims.input}, {"d_e", m.dims.hidden}, {"d_prime", m.dims.attention}}},
            {"seed", m.seed},
            {"trained", m.trained},
            {"tensors", tensor_names(m.params)}};
  write_file(path, h, m.params);
}

ExpertModel load_expert(const std::filesystem::path& path) {
  RawCheckpoint raw = read_file(path, "expert");
  try {
    const auto arch = parse_arch(raw.header.at("arch").get<std::string>());
    if (!arch) throw ParseError("unknown expert architecture in " + path.string(), 0);
    const auto& d = raw.header.at("dims");
    ExpertModel m = init_expert(
        *arch, {d.at("d").get<int>(), d.at("d_e").get<int>(), d.at("d_prime").get<int>()},
        raw.header.at("seed").get<std::uint64_t>());
    for (const auto& p : m.params) {
      const Matrix& stored = raw.params.at(p.name);
      if (stored.rows() != p.value.rows() || stored.cols() != p.value.cols()) {
        throw ParseError("tensor " + p.name + " has the wrong shape", 0);
      }
    }
    if (raw.params.size() != m.params.size()) throw ParseError("unexpected tensor count", 0);
    m.params = std::move(raw.params);
    m.trained = raw.header.at("trained").get<bool>();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad expert header: ") + e.what(), 0);
  } catch (const ReferenceError& e) {
    throw ParseError(std::string("missing tensor: ") + e.what(), 0);
  }
}

void save_router(const RouterModel& r, const std::filesystem::path& path) {
  json h = {{"kind", "router"},
            {"dims",
             {{"d", r.dims.input},
              {"d_r", r.dims.features},
              {"d_m", r.dims.memory},
              {"M", r.dims.slots},
              {"E", r.dims.experts}}},
            {"use_memory", r.use_memory},
            {"seed", r.seed},
            {"features", r.feature_names},
            {"tensors", tensor_names(r.params)}};
  write_file(path, h, r.params);
}

RouterModel load_router(const std::filesystem::path& path) {
  RawCheckpoint raw = read_file(path, "router");
  try {
    const auto& d = raw.header.at("dims");
    RouterDims dims{d.at("d").get<int>(), d.at("d_r").get<int>(), d.at("d_m").get<int>(),
                    d.at("M").get<int>(), d.at("E").get<int>()};
    RouterModel r = init_router(dims, raw.header.at("seed").get<std::uint64_t>(),
                                raw.header.at("use_memory").get<bool>());
    for (const auto& p : r.params) {
      const Matrix& stored = raw.params.at(p.name);
      if (stored.rows() != p.value.rows() || stored.cols() != p.value.cols()) {
        throw ParseError("tensor " + p.name + " has the wrong shape", 0);
      }
    }
    if (raw.params.size() != r.params.size()) throw ParseError("unexpected tensor count", 0);
    r.params = std::move(raw.params);
    r.feature_names = raw.header.at("features").get<std::vector<std::string>>();
    if (static_cast<int>(r.feature_names.size()) != dims.features) {
      throw ParseError("feature name count does not match d_r", 0);
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad router header: ") + e.what(), 0);
  } catch (const ReferenceError& e) {
    throw ParseError(std::string("missing tensor: ") + e.what(), 0);
  }
}

void save_tensors(const ParameterList& tensors, const std::filesystem::path& path) {
  write_file(path, {{"kind", "tensors"}, {"tensors", tensor_names(tensors)}}, tensors);
}

ParameterList load_tensors(const std::filesystem::path& path) {
  return read_file(path, "tensors").params;
}

}  // namespace evofg
