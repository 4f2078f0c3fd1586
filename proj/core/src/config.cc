// Copyright 2026 The regdisp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "regdisp/config.h"

#include <bit>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "regdisp/error.h"

namespace regdisp {

namespace {

std::string join_violations(const std::vector<std::string>& violations) {
  std::string msg = "invalid machine configuration:";
  for (const auto& v : violations) {
    msg += "\n  - ";
    msg += v;
  }
  return msg;
}

bool is_pow2(long long v) { return v > 0 && std::has_single_bit(
    static_cast<unsigned long long>(v)); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  int base = 10;
  if (value.size() > 2 && value[0] == '0' && (value[1] == 'x' || value[1] == 'X')) {
    base = 16;
    value.remove_prefix(2);
  }
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                   out, base);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw InvalidConfig({"key '" + std::string(key) +
                         "': expected an integer, got '" + std::string(value) +
                         "'"});
  }
  return out;
}

template <typename E>
E parse_enum(std::string_view key, std::string_view value,
             std::initializer_list<std::pair<std::string_view, E>> options) {
  for (const auto& [name, e] : options) {
    if (value == name) return e;
  }
  std::string allowed;
  for (const auto& [name, e] : options) {
    if (!allowed.empty()) allowed += "|";
    allowed += name;
  }
  throw InvalidConfig({"key '" + std::string(key) + "': expected " + allowed +
                       ", got '" + std::string(value) + "'"});
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

ValidatedConfig validate(const MachineConfig& c) {
  std::vector<std::string> v;
  if (c.vlen_bits <= 0 || c.vlen_bits % 32 != 0) {
    v.push_back("vlen_bits must be a positive multiple of 32");
  } else if (!is_pow2(c.vlen_bits)) {
    v.push_back("vlen_bits must be a power of two");
  }
  if (c.vlen_bits > kMaxVlenBits) {
    v.push_back("vlen_bits must not exceed " + std::to_string(kMaxVlenBits));
  }
  if (!is_pow2(c.line_bytes) || c.line_bytes < 4) {
    v.push_back("line_bytes must be a power of two >= 4");
  }
  if (c.vlen_bits > c.line_bytes * 8) {
    v.push_back("vlen_bits (" + std::to_string(c.vlen_bits) +
                ") exceeds the cacheline width (" +
                std::to_string(c.line_bytes * 8) + " bits)");
  }
  if (c.vlen_bits > 0 && c.lanes != c.vlen_bits / 32) {
    v.push_back("lanes must equal vlen_bits / 32 (" +
                std::to_string(c.vlen_bits / 32) + ")");
  }
  if (c.num_arch_vregs != kNumArchVregs) {
    v.push_back("num_arch_vregs must be 32");
  }
  if (c.vrf_model == VrfKind::kCompact &&
      (c.cvrf_size < 3 || c.cvrf_size > kNumArchVregs)) {
    v.push_back("cvrf_size must be in [3, 32] (three operands are pinned "
                "per instruction)");
  }
  if (c.l1_ways <= 0) v.push_back("l1_ways must be positive");
  if (c.l1_size_bytes <= 0) v.push_back("l1_size_bytes must be positive");
  if (c.l1_ways > 0 && c.line_bytes > 0 && c.l1_size_bytes > 0 &&
      c.l1_size_bytes % (c.l1_ways * c.line_bytes) != 0) {
    v.push_back("l1_size_bytes must be divisible by l1_ways * line_bytes");
  }
  if (c.l1_hit_cycles < 1) v.push_back("l1_hit_cycles must be >= 1");
  if (c.mem_latency_cycles < 1 || c.mem_latency_cycles > 5) {
    v.push_back("mem_latency_cycles must be in [1, 5]");
  }
  if (c.mem_size_bytes == 0 ||
      (c.line_bytes > 0 && c.mem_size_bytes % c.line_bytes != 0)) {
    v.push_back("mem_size_bytes must be a positive multiple of line_bytes");
  }
  if (c.vlen_bits > 0 && c.vlen_bits % 8 == 0) {
    if (c.spill_base_addr % c.vlen_bytes() != 0) {
      v.push_back("spill_base_addr must be aligned to vlen_bits / 8");
    }
    if (c.spill_base_addr + c.spill_region_bytes() > c.mem_size_bytes) {
      v.push_back("spill region extends past the end of memory");
    }
  }
  if (!v.empty()) throw InvalidConfig(std::move(v));
  return ValidatedConfig(c);
}

MachineConfig parse_config_text(std::string_view text,
                                const MachineConfig& base) {
  MachineConfig c = base;
  using Setter = std::function<void(std::string_view, std::string_view)>;
  const std::map<std::string_view, Setter> setters = {
      {"vlen_bits", [&](auto k, auto v) { c.vlen_bits = parse_integer<int>(k, v); }},
      {"lanes", [&](auto k, auto v) { c.lanes = parse_integer<int>(k, v); }},
      {"num_arch_vregs",
       [&](auto k, auto v) { c.num_arch_vregs = parse_integer<int>(k, v); }},
      {"vrf_model",
       [&](auto k, auto v) {
         c.vrf_model = parse_enum<VrfKind>(
             k, v, {{"full", VrfKind::kFull}, {"compact", VrfKind::kCompact}});
       }},
      {"cvrf_size", [&](auto k, auto v) { c.cvrf_size = parse_integer<int>(k, v); }},
      {"replacement",
       [&](auto k, auto v) {
         c.replacement = parse_enum<Replacement>(
             k, v, {{"fifo", Replacement::kFifo}, {"lru", Replacement::kLru}});
       }},
      {"l1_size_bytes",
       [&](auto k, auto v) { c.l1_size_bytes = parse_integer<int>(k, v); }},
      {"l1_ways", [&](auto k, auto v) { c.l1_ways = parse_integer<int>(k, v); }},
      {"line_bytes", [&](auto k, auto v) { c.line_bytes = parse_integer<int>(k, v); }},
      {"l1_hit_cycles",
       [&](auto k, auto v) { c.l1_hit_cycles = parse_integer<int>(k, v); }},
      {"mem_latency_cycles",
       [&](auto k, auto v) { c.mem_latency_cycles = parse_integer<int>(k, v); }},
      {"mem_size_bytes",
       [&](auto k, auto v) { c.mem_size_bytes = parse_integer<Addr>(k, v); }},
      {"spill_base_addr",
       [&](auto k, auto v) { c.spill_base_addr = parse_integer<Addr>(k, v); }},
      {"dest_fetch",
       [&](auto k, auto v) {
         c.dest_fetch = parse_enum<DestFetch>(
             k, v,
             {{"paper_faithful", DestFetch::kPaperFaithful},
              {"semantic", DestFetch::kSemantic}});
       }},
      {"writeback_on_evict",
       [&](auto k, auto v) {
         c.writeback_on_evict = parse_enum<WritebackOnEvict>(
             k, v,
             {{"always", WritebackOnEvict::kAlways},
              {"dirty_only", WritebackOnEvict::kDirtyOnly}});
       }},
  };

  std::vector<std::string> errors;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back("line " + std::to_string(line_no) +
                       ": expected key=value");
      continue;
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) {
      errors.push_back("line " + std::to_string(line_no) + ": unknown key '" +
                       std::string(key) + "'");
      continue;
    }
    try {
      it->second(key, value);
    } catch (const InvalidConfig& e) {
      for (const auto& v : e.violations()) {
        errors.push_back("line " + std::to_string(line_no) + ": " + v);
      }
    }
  }
  if (!errors.empty()) throw InvalidConfig(std::move(errors));
  return c;
}

MachineConfig load_config_file(const std::filesystem::path& path,
                               const MachineConfig& base) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidConfig({"cannot open config file '" + path.string() + "'"});
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), base);
}

std::string to_config_text(const MachineConfig& c) {
  std::ostringstream out;
  out << "vlen_bits=" << c.vlen_bits << "\n"
      << "lanes=" << c.lanes << "\n"
      << "num_arch_vregs=" << c.num_arch_vregs << "\n"
      << "vrf_model=" << to_string(c.vrf_model) << "\n"
      << "cvrf_size=" << c.cvrf_size << "\n"
      << "replacement=" << to_string(c.replacement) << "\n"
      << "l1_size_bytes=" << c.l1_size_bytes << "\n"
      << "l1_ways=" << c.l1_ways << "\n"
      << "line_bytes=" << c.line_bytes << "\n"
      << "l1_hit_cycles=" << c.l1_hit_cycles << "\n"
      << "mem_latency_cycles=" << c.mem_latency_cycles << "\n"
      << "mem_size_bytes=" << c.mem_size_bytes << "\n"
      << "spill_base_addr=0x" << std::hex << c.spill_base_addr << std::dec
      << "\n"
      << "dest_fetch=" << to_string(c.dest_fetch) << "\n"
      << "writeback_on_evict=" << to_string(c.writeback_on_evict) << "\n";
  return out.str();
}

std::string_view to_string(VrfKind kind) {
  return kind == VrfKind::kFull ? "full" : "compact";
}
std::string_view to_string(Replacement policy) {
  return policy == Replacement::kFifo ? "fifo" : "lru";
}
std::string_view to_string(DestFetch policy) {
  return policy == DestFetch::kPaperFaithful ? "paper_faithful" : "semantic";
}
std::string_view to_string(WritebackOnEvict policy) {
  return policy == WritebackOnEvict::kAlways ? "always" : "dirty_only";
}

}  // namespace regdisp
