#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bstkit/aux_io.hpp"
#include "bstkit/bib_database.hpp"
#include "bstkit/bst_lang.hpp"
#include "bstkit/bst_vm.hpp"
#include "bstkit/name_engine.hpp"

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(BSTKIT_TEST_DATA_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string synthetic_bib(int entries) {
  std::string out;
  for (int i = 0; i < entries; ++i) {
    out += "@article{key" + std::to_string(i) +
           ",\n  author = {Stein P. R. and Ulam S. M.},\n  title = {Non-linear transformation studies "
           "on electronic computers},\n  journal = {Rozprawy Mat.},\n  year = {1964},\n  volume = {39}}\n\n";
  }
  return out;
}

void BM_ParseBib(benchmark::State& state) {
  const std::string text = synthetic_bib(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bstkit::parse_bib(text, "bench.bib"));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseBib)->Arg(10)->Arg(1000);

void BM_RunSortedStyle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::string style = slurp("helloword.bst");
  style.insert(style.find("READ\n") + 5, "\n" + slurp("lastname_sort_fragment.bst") + "\n");
  const bstkit::Program program = bstkit::parse_bst(style, "bench.bst").program;
  std::vector<bstkit::Database> dbs{bstkit::parse_bib(synthetic_bib(n), "bench.bib").db};
  bstkit::AuxFile aux;
  for (int i = n - 1; i >= 0; --i) aux.citations.push_back("key" + std::to_string(i));
  for (auto _ : state) benchmark::DoNotOptimize(bstkit::run(program, aux, dbs));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RunSortedStyle)->Arg(10)->Arg(1000);

void BM_ParseName(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(bstkit::parse_name("Charles Louis Xavier Joseph de la Vall{\\'e}e Poussin"));
    benchmark::DoNotOptimize(bstkit::parse_name("de la Cruz, Jr., Maria"));
  }
}
BENCHMARK(BM_ParseName);

void BM_FormatName(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bstkit::format_name("Yang Tse-Chung", "{ff}{vv}{l.}{jj}"));
}
BENCHMARK(BM_FormatName);

}  // namespace

BENCHMARK_MAIN();
