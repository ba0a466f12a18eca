#include <benchmark/benchmark.h>

#include "qyw/classify.hpp"
#include "qyw/repforge.hpp"
#include "qyw/rttcore.hpp"

using namespace qyw;

namespace {

QRat qp(int e) { return QRat::q_pow(e); }

void BM_QRatArithmetic(benchmark::State& state) {
  const QRat a = (qp(3) + QRat(2)) / (qp(1) - QRat(1)), b = (qp(2) - qp(-1)) / (qp(1) + QRat(3));
  for (auto _ : state) {
    QRat c = a * b + a / b - b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_QRatArithmetic);

void BM_YangBaxter(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ybe_check(N));
}
BENCHMARK(BM_YangBaxter)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Straighten(benchmark::State& state) {
  auto p = Presentation::make(state.range(0) == 0 ? "uqgl:3" : "yqsp:2");
  const ConfluenceReport corpus = confluence_fuzz(*p, 4, 50, 3, 2);
  for (auto _ : state)
    for (const NCPoly& x : corpus.corpus) benchmark::DoNotOptimize(p->straighten(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.corpus.size()));
}
BENCHMARK(BM_Straighten)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EvalModuleVerify(benchmark::State& state) {
  const int cap = static_cast<int>(state.range(0));
  const ModuleRep L = std::get<ModuleRep>(gl2_finite_module(qp(2), QRat(1)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_relations(eval_affine(L, cap)));
}
BENCHMARK(BM_EvalModuleVerify)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_TensorIrreducibility(benchmark::State& state) {
  const ModuleRep A = eval_affine(std::get<ModuleRep>(gl2_finite_module(qp(2), QRat(1))), 6);
  const ModuleRep B = eval_affine(std::get<ModuleRep>(gl2_finite_module(-qp(4), qp(2))), 6);
  const ModuleRep T = tensor(A, B);
  const bool twisted = state.range(0) != 0;
  const ModuleRep R = twisted ? twisted_restrict(T) : T;
  for (auto _ : state) benchmark::DoNotOptimize(is_irreducible(R));
}
BENCHMARK(BM_TensorIrreducibility)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PadeReconstruct(benchmark::State& state) {
  UCoeffs Q = ucoeffs_mul({QRat(1), qp(2)}, {QRat(1), QRat(-3)});
  UCoeffs R = ucoeffs_mul(ucoeffs_mul({QRat(1), qp(-1)}, {QRat(1), QRat(5) * qp(1)}), {QRat(1), -qp(3)});
  const USeries fn = ratio_expand(Q, R, Dir::neg, 9), fp = ratio_expand(Q, R, Dir::pos, 9);
  for (auto _ : state) benchmark::DoNotOptimize(pade_reconstruct(fn, fp, 3));
}
BENCHMARK(BM_PadeReconstruct)->Unit(benchmark::kMillisecond);

void BM_ClassifyTwistedEval(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const ModuleRep W = twisted_eval(std::get<ModuleRep>(uqsp2_module(QRat(1), -qp(2 * p + 1))), 8);
  const HighestWeightData hw = highest_weight_of(W);
  for (auto _ : state) benchmark::DoNotOptimize(classify_sp2n_series(hw.first, hw.second, 3));
}
BENCHMARK(BM_ClassifyTwistedEval)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
