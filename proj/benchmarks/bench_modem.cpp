#include <benchmark/benchmark.h>

#include "lwlink/channel.hpp"
#include "lwlink/fft.hpp"
#include "lwlink/ofdm_rx.hpp"
#include "lwlink/ofdm_tx.hpp"
#include "lwlink/rng.hpp"

using namespace lwlink;
using namespace lwlink::ofdm;

namespace {

std::vector<cfloat> random_vector(std::size_t n, std::uint64_t seed) {
  Xoshiro256 rng = Xoshiro256::seeded(seed);
  std::vector<cfloat> v(n);
  for (auto& s : v) {
    s = cfloat(static_cast<float>(2 * rng.unit() - 1),
               static_cast<float>(2 * rng.unit() - 1));
  }
  return v;
}

TaggedPayload random_payload(std::uint64_t seed) {
  Xoshiro256 rng = Xoshiro256::seeded(seed);
  TaggedPayload p;
  rng.fill(p.bytes);
  return p;
}

void BM_Ifft64(benchmark::State& state) {
  const auto x = random_vector(64, 1);
  for (auto _ : state) {
    auto out = ifft64(x);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Ifft64);

void BM_TransmitFrame(benchmark::State& state) {
  const auto payload = random_payload(2);
  const auto mod = static_cast<Modulation>(state.range(0));
  const auto& plan = CarrierPlan::ieee80211a();
  for (auto _ : state) {
    auto iq = transmit_frame(payload, mod, plan, 0.02);
    benchmark::DoNotOptimize(iq.samples.data());
  }
  state.SetBytesProcessed(state.iterations() * kPayloadBytes);
}
BENCHMARK(BM_TransmitFrame)
    ->Arg(static_cast<int>(Modulation::Bpsk))
    ->Arg(static_cast<int>(Modulation::Qpsk));

void BM_ReceiveFrame(benchmark::State& state) {
  const auto payload = random_payload(3);
  const auto mod = static_cast<Modulation>(state.range(0));
  const auto& plan = CarrierPlan::ieee80211a();
  const auto tx = transmit_frame(payload, mod, plan, 0.02);
  for (auto _ : state) {
    auto decoded = receive_frame(tx, mod, plan);
    benchmark::DoNotOptimize(&decoded);
  }
  state.SetBytesProcessed(state.iterations() * kPayloadBytes);
}
BENCHMARK(BM_ReceiveFrame)
    ->Arg(static_cast<int>(Modulation::Bpsk))
    ->Arg(static_cast<int>(Modulation::Qpsk));

void BM_SchmidlSync(benchmark::State& state) {
  const auto payload = random_payload(4);
  const auto& plan = CarrierPlan::ieee80211a();
  auto tx = transmit_frame(payload, Modulation::Qpsk, plan, 0.02);
  IqBuffer padded;
  padded.samples.assign(500, cfloat(0.f, 0.f));
  padded.samples.insert(padded.samples.end(), tx.samples.begin(),
                        tx.samples.end());
  const auto rx = channel::awgn(padded, 15.0, 9);
  for (auto _ : state) {
    auto sync = schmidl_sync(rx);
    benchmark::DoNotOptimize(&sync);
  }
}
BENCHMARK(BM_SchmidlSync);

void BM_Awgn(benchmark::State& state) {
  IqBuffer buf;
  buf.samples = random_vector(8192, 5);
  for (auto _ : state) {
    auto noisy = channel::awgn(buf, 10.0, 7);
    benchmark::DoNotOptimize(noisy.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * 8192);
}
BENCHMARK(BM_Awgn);

}  // namespace

BENCHMARK_MAIN();
