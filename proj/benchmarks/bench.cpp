#include <benchmark/benchmark.h>

#include "tgr/bisimulation.hpp"
#include "tgr/dpo.hpp"
#include "tgr/parallel.hpp"
#include "tgr/workspace.hpp"

using namespace tgr;

namespace {

// A cycle of n cons cells, each also pointing at a shared f(a).
Workspace ring(std::size_t n) {
  std::string text = "sig cdr/1 cons/2 f/1 g/1 a/0\ngraph Ring {\n  fa: f(a);\n  a: a;\n";
  for (std::size_t i = 0; i < n; ++i)
    text += "  c" + std::to_string(i) + ": cons(fa, c" + std::to_string((i + 1) % n) + ");\n";
  text += "  o: cdr(c0);\n  root o;\n}\nrule R_f: f(x) -> g(x)\nrule R_cdr: cdr(cons(x, y)) -> y\n";
  return parse_workspace(text);
}

void BM_unravel(benchmark::State& state) {
  Workspace w = ring(8);
  RationalTerm t = w.graph("Ring").pointed();
  for (auto _ : state) benchmark::DoNotOptimize(unravel(t, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_unravel)->Arg(16)->Arg(64)->Arg(256);

void BM_derive(benchmark::State& state) {
  Workspace w = ring(static_cast<std::size_t>(state.range(0)));
  auto m = match_at(w.tgrs.at("R_f"), w.graph("Ring").graph, "fa");
  for (auto _ : state) benchmark::DoNotOptimize(derive(*m));
}
BENCHMARK(BM_derive)->Arg(8)->Arg(64)->Arg(512);

void BM_oracle(benchmark::State& state) {
  Workspace w = ring(4);
  RationalTerm t = w.graph("Ring").pointed();
  OracleOptions o;
  o.depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(infinite_parallel_reduce(t, {RationalRedexSet{t, "fa", "R_f"}}, w.trs, o));
}
BENCHMARK(BM_oracle)->Arg(8)->Arg(16)->Arg(32);

void BM_minimize(benchmark::State& state) {
  // n copies of the same f-cycle of length 3 collapse to one node.
  TermGraph g;
  auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < 3 * n; ++i)
    g.add_node("n" + std::to_string(i), "f", {"n" + std::to_string((i + 1) % (3 * n))});
  for (auto _ : state) benchmark::DoNotOptimize(minimize(g));
}
BENCHMARK(BM_minimize)->Arg(16)->Arg(256)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
