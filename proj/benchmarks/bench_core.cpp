#include "padic/audit.hpp"
#include "padic/domain.hpp"
#include "padic/extension.hpp"
#include "padic/family.hpp"
#include "padic/lattice.hpp"
#include "padic/pseudorep.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace padic;

namespace {

void BM_ElementMul(benchmark::State &st) {
  const auto E = Context::ramified_over(Context::qp(5, 20), static_cast<int>(st.range(0)),
                                        20 * static_cast<int>(st.range(0)));
  std::mt19937_64 rng(1);
  const Element a = Element::random(E, rng), b = Element::random(E, rng);
  for (auto _ : st)
    benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_ElementMul)->Arg(1)->Arg(2)->Arg(3);

void BM_ElementInverse(benchmark::State &st) {
  const auto E = Context::unramified(5, 2, 20);
  std::mt19937_64 rng(2);
  const Element a = Element::random_unit(E, rng);
  for (auto _ : st)
    benchmark::DoNotOptimize(a.inverse());
}
BENCHMARK(BM_ElementInverse);

void BM_GammaInjectivity(benchmark::State &st) {
  const auto L = Context::qp(3, 8);
  const Embedding emb = Embedding::make(L, Context::ramified_over(L, 3, 24));
  for (auto _ : st)
    benchmark::DoNotOptimize(gamma_injectivity_check(emb, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_GammaInjectivity)->Arg(1)->Arg(2)->Arg(3);

void BM_PointwiseAudit(benchmark::State &st) {
  const auto L = Context::qp(3, 20);
  const std::vector<CtxPtr> exts = {L, Context::ramified_over(L, 2, 40)};
  const auto disc = AlgebraModel::disc(L, {"z"}, {"T"}, 5);
  std::mt19937_64 rng(3);
  const Series f = random_series(disc, rng, 5, 3);
  const ModelPoint x{disc, Embedding::identity(L), {Element::zero(L), Element::zero(L)}};
  const auto U = describe(disc, x, 2, DomainKind::WideOpenU);
  for (auto _ : st)
    benchmark::DoNotOptimize(pointwise_constancy_audit(f, U, 2, exts, 10, 7));
}
BENCHMARK(BM_PointwiseAudit);

void BM_Carayol(benchmark::State &st) {
  const auto ctx = Context::qp(5, 20);
  std::mt19937_64 rng(4);
  const int n = static_cast<int>(st.range(0));
  const auto pair = make_congruent_pair(ctx, n, rng);
  for (auto _ : st)
    benchmark::DoNotOptimize(carayol_audit(pair.a, pair.b, n, 3, 5));
}
BENCHMARK(BM_Carayol)->Arg(1)->Arg(2)->Arg(3);

void BM_PseudorepKernel(benchmark::State &st) {
  const auto ctx = Context::qp(5, 10);
  const auto G = GroupPresentation::cyclic(static_cast<int>(st.range(0)));
  std::map<Word, Element> two;
  for (int g = 0; g < G.order(); ++g)
    two[G.word_of(g)] = Element::from_int(ctx, 2);
  const auto T = pseudorep_from_table(G, 1, two);
  for (auto _ : st)
    benchmark::DoNotOptimize(pseudorep_kernel(T, 2));
}
BENCHMARK(BM_PseudorepKernel)->Arg(4)->Arg(8)->Arg(12);

} // namespace

BENCHMARK_MAIN();
