#include <benchmark/benchmark.h>

#include "lwlink/aead.hpp"
#include "lwlink/permutation.hpp"
#include "lwlink/rng.hpp"

using namespace lwlink;
using namespace lwlink::crypto;

namespace {

Bytes random_state(unsigned bits) {
  Xoshiro256 rng = Xoshiro256::seeded(1);
  Bytes state((bits + 7) / 8);
  rng.fill(state);
  if (bits % 8) state.back() &= static_cast<std::uint8_t>((1u << (bits % 8)) - 1);
  return state;
}

void BM_Permutation(benchmark::State& state) {
  const unsigned bits = static_cast<unsigned>(state.range(0));
  Bytes s = random_state(bits);
  for (auto _ : state) {
    reference_permutation_in_place(s, bits);
    benchmark::DoNotOptimize(s.data());
  }
  state.SetBytesProcessed(state.iterations() *
                          static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_Permutation)->Arg(256)->Arg(259)->Arg(320);

void BM_AeadEncrypt128B(benchmark::State& state) {
  Xoshiro256 rng = Xoshiro256::seeded(2);
  AeadParams params;
  params.l_ad_blocks = 2;
  params.l_msg_blocks = 16;
  params.key = rng.next_block16();
  params.nonce = rng.next_block16();
  Bytes ad(16), msg(128);
  rng.fill(ad);
  rng.fill(msg);
  const auto& spec = PermutationSpec::for_scheme(
      static_cast<Scheme>(state.range(0)));
  for (auto _ : state) {
    auto out = aead_encrypt(params, ad, msg, spec);
    benchmark::DoNotOptimize(out.second.data());
  }
  state.SetBytesProcessed(state.iterations() * 128);
}
BENCHMARK(BM_AeadEncrypt128B)
    ->Arg(static_cast<int>(Scheme::Spix))
    ->Arg(static_cast<int>(Scheme::Ace))
    ->Arg(static_cast<int>(Scheme::Wage));

void BM_Kdf(benchmark::State& state) {
  Xoshiro256 rng = Xoshiro256::seeded(3);
  const Block16 pmk = rng.next_block16();
  const Block16 an = rng.next_block16();
  const Block16 sn = rng.next_block16();
  MacAddr ap{}, sta{};
  rng.fill(ap);
  rng.fill(sta);
  const auto& spec = PermutationSpec::for_scheme(Scheme::Spix);
  for (auto _ : state) {
    auto keys = kdf(pmk, an, sn, ap, sta, spec);
    benchmark::DoNotOptimize(&keys);
  }
}
BENCHMARK(BM_Kdf);

void BM_Mic(benchmark::State& state) {
  Xoshiro256 rng = Xoshiro256::seeded(4);
  const Block16 kck = rng.next_block16();
  const Block16 nonce = rng.next_block16();
  const Block16 r = counter_from_u64(1);
  const auto& spec = PermutationSpec::for_scheme(Scheme::Spix);
  for (auto _ : state) {
    auto tag = mic(kck, nonce, r, spec);
    benchmark::DoNotOptimize(tag.data());
  }
}
BENCHMARK(BM_Mic);

}  // namespace

BENCHMARK_MAIN();
