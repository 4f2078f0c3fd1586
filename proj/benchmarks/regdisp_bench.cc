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

#include <benchmark/benchmark.h>

#include <random>

#include "regdisp/config.h"
#include "regdisp/experiments.h"
#include "regdisp/kernels.h"
#include "regdisp/memsys.h"
#include "regdisp/pipeline.h"
#include "regdisp/vasm.h"
#include "regdisp/vrf.h"

namespace {

using namespace regdisp;

const std::string& kernel_at(int index) { return kernel_names().at(index); }

// Whole-kernel simulation; arg0 = kernel index, arg1 = cVRF size (0 = full).
void BM_RunKernel(benchmark::State& state) {
  const KernelCase kc = build_kernel(kernel_at(static_cast<int>(state.range(0))));
  const Program program = parse(kc.source);
  const int size = static_cast<int>(state.range(1));
  const ValidatedConfig config =
      validate(size == 0 ? MachineConfig{} : compact_config(MachineConfig{}, size));
  std::uint64_t instructions = 0;
  for (auto _ : state) {
    const RunResult r = run(program, config, kc.inputs);
    instructions += r.stats.instructions_retired;
    benchmark::DoNotOptimize(r.stats.cycles);
  }
  state.SetLabel(kc.name);
  state.counters["instr/s"] = benchmark::Counter(
      static_cast<double>(instructions), benchmark::Counter::kIsRate);
}

void kernel_args(benchmark::internal::Benchmark* b) {
  for (int k = 0; k < static_cast<int>(kernel_names().size()); ++k) {
    for (int size : {0, 3, 8}) b->Args({k, size});
  }
}
BENCHMARK(BM_RunKernel)->Apply(kernel_args)->Unit(benchmark::kMillisecond);

void BM_CompactResolve(benchmark::State& state) {
  MachineConfig c;
  c.vrf_model = VrfKind::kCompact;
  c.cvrf_size = static_cast<int>(state.range(0));
  CompactVrf vrf(validate(c));
  std::mt19937_64 rng(1);
  std::vector<OperandList> stream(4096);
  for (OperandList& ops : stream) {
    ops.push({static_cast<std::uint8_t>(1 + rng() % 12), true, false});
    ops.push({static_cast<std::uint8_t>(1 + rng() % 12), true, false});
    ops.push({static_cast<std::uint8_t>(1 + rng() % 12), true, true});
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vrf.resolve(stream[i++ & 4095]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CompactResolve)->Arg(3)->Arg(8)->Arg(16);

void BM_L1Access(benchmark::State& state) {
  MemorySystem mem(validate(MachineConfig{}));
  std::mt19937_64 rng(2);
  std::vector<Addr> addrs(4096);
  for (Addr& a : addrs) a = 0x10000 + (rng() % 4096) * 32;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mem.access(addrs[i++ & 4095], 4, false));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_L1Access);

void BM_ParseKernel(benchmark::State& state) {
  const std::string source = build_kernel("phase_rotation").source;
  for (auto _ : state) benchmark::DoNotOptimize(parse(source));
  state.SetBytesProcessed(state.iterations() *
                          static_cast<std::int64_t>(source.size()));
}
BENCHMARK(BM_ParseKernel);

void BM_Sweep(benchmark::State& state) {
  std::vector<int> sizes;
  for (int n = 3; n <= 16; ++n) sizes.push_back(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sweep(kernel_names(), sizes, MachineConfig{}, kDefaultSeed));
  }
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
