#include "bstkit/latex_cite_pass.hpp"

#include "bstkit/aux_io.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bstkit;
using bstkit::testing::read_data;
using Keys = std::vector<std::string>;

namespace {

const std::string fig1 = read_data("test.tex");
const std::string fig7 = read_data("test.aux.expected");

PassOptions named(const std::string& base) {
  PassOptions o;
  o.base_name = base;
  return o;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Concatenated citation marks; every cite in the sample follows a tie.
std::string marks(const std::string& rendered) {
  std::string out;
  for (auto i = rendered.find("~["); i != std::string::npos; i = rendered.find("~[", i + 1)) {
    out += rendered.substr(i + 1, rendered.find(']', i) - i);
  }
  return out;
}

}  // namespace

TEST_CASE("scan inline document") {
  TexScan s = scan_tex(fig1);
  CHECK(s.cites == Keys{"Ulam-1964", "Poincare", "Ulam-1964"});
  CHECK(s.inline_bib == Keys{"Poincare", "Ulam-1964"});
  CHECK(s.has_bibliography_env);
  CHECK_FALSE(s.external_mode());
  CHECK(s.diagnostics.empty());
  REQUIRE(s.sites.size() == 3);
  CHECK(s.sites[0].line == 4);
  CHECK(s.sites[2].line == 5);
  CHECK(fig1.substr(s.sites[1].begin, s.sites[1].end - s.sites[1].begin) == "\\cite{Poincare}");
}

TEST_CASE("scan external document") {
  TexScan s = scan_tex(read_data("test2.tex"));
  CHECK(s.cites == Keys{"Ulam-1964", "Poincare"});
  CHECK(s.style == "plain");
  CHECK(s.data == Keys{"my"});
  CHECK(s.inline_bib.empty());
  CHECK(s.external_mode());
}

TEST_CASE("scan plain text") {
  TexScan s = scan_tex("no citations here");
  CHECK(s.cites.empty());
  CHECK(s.inline_bib.empty());
  CHECK_FALSE(s.style.has_value());
  CHECK(s.data.empty());
  CHECK(s.sites.empty());
}

TEST_CASE("comments hide commands") {
  TexScan s = scan_tex("% \\cite{hidden}\nText \\cite{shown} 50\\% done \\cite{also}\n");
  CHECK(s.cites == Keys{"shown", "also"});
}

TEST_CASE("multi-key cites and similar command names") {
  TexScan s = scan_tex("\\cite{a, b}\\citep{x}\\bibliography{one,two}");
  CHECK(s.cites == Keys{"a", "b"});
  CHECK(s.data == Keys{"one", "two"});
  REQUIRE(s.sites.size() == 1);
  CHECK(s.sites[0].keys == Keys{"a", "b"});
}

TEST_CASE("unbalanced braces in a recognized command") {
  try {
    scan_tex("line one\n\\cite{Ulam\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(scan_tex("\\bibliographystyle"), ParseError);
}

TEST_CASE("both bibliography mechanisms give a diagnostic") {
  TexScan s = scan_tex("\\begin{thebibliography}{9}\\bibitem{a} A\\end{thebibliography}\\bibliography{my}");
  CHECK_FALSE(s.diagnostics.empty());
}

TEST_CASE("first pass without an aux") {
  PassResult r = run_pass(scan_tex(fig1), std::nullopt, named("test"));
  CHECK(marks(r.rendered) == "[?][?][?]");
  CHECK(r.undefined == 3);
  CHECK(write_aux(r.new_aux) == fig7);
  CHECK(r.labels_changed);
  REQUIRE(r.warnings.size() == 5);
  CHECK(r.warnings[0] == "No file test.aux.");
  CHECK(r.warnings[1] == "Citation `Ulam-1964' on page 1 undefined on input line 4");
  CHECK(r.warnings[2] == "Citation `Poincare' on page 1 undefined on input line 4");
  CHECK(r.warnings[3] == "Citation `Ulam-1964' on page 1 undefined on input line 5");
  CHECK(r.warnings[4] == rerun_warning);
}

TEST_CASE("second pass resolves numbers") {
  PassResult r = run_pass(scan_tex(fig1), parse_aux(fig7), named("test"));
  CHECK(marks(r.rendered) == "[2][1][2]");
  CHECK(r.undefined == 0);
  CHECK(write_aux(r.new_aux) == fig7);
  CHECK_FALSE(r.labels_changed);
  CHECK(r.warnings.empty());
}

TEST_CASE("tampered labels are rendered, then restored") {
  AuxFile tampered = parse_aux(fig7);
  tampered.set_bibcite("Poincare", "10");
  tampered.set_bibcite("Ulam-1964", "25");
  PassResult r = run_pass(scan_tex(fig1), tampered);
  CHECK(marks(r.rendered) == "[25][10][25]");
  CHECK(write_aux(r.new_aux) == fig7);
  CHECK(r.labels_changed);
  CHECK(has(r.warnings, std::string(rerun_warning)));
}

TEST_CASE("rendering preserves non-cite text") {
  const std::string tex = "a \\cite{x} b\\cite{y,z}c";
  AuxFile aux;
  aux.set_bibcite("x", "1");
  aux.set_bibcite("z", "3");
  PassResult r = run_pass(scan_tex(tex), aux);
  CHECK(r.rendered == "a [1] b[?,3]c");
  CHECK(r.undefined == 1);
}

TEST_CASE("bibcite order does not matter for change detection") {
  AuxFile a = parse_aux(fig7);
  AuxFile b;
  b.citations = a.citations;
  b.set_bibcite("Ulam-1964", "2");
  b.set_bibcite("Poincare", "1");
  CHECK(same_bibcites(a, b));
  CHECK_FALSE(run_pass(scan_tex(fig1), b).labels_changed);
}

TEST_CASE("external mode writes style and data, and reads labels from the bbl") {
  const TexScan s = scan_tex(read_data("test2.tex"));
  PassResult first = run_pass(s, std::nullopt, named("test2"));
  // The sample aux lists a third \citation that the document never makes.
  CHECK(write_aux(first.new_aux) ==
        "\\relax\n\\citation{Ulam-1964}\n\\citation{Poincare}\n\\bibstyle{plain}\n\\bibdata{my}\n");
  CHECK(unique_citation_order(first.new_aux) == unique_citation_order(parse_aux(read_data("test2.aux.expected"))));
  CHECK_FALSE(first.labels_changed);  // no bibcites before or after

  PassOptions with_bbl = named("test2");
  with_bbl.bbl_text = "\\begin{thebibliography}{10}\n\\bibitem{Poincare}\nx\n\\bibitem{Ulam-1964}\ny\n"
                      "\\end{thebibliography}\n";
  PassResult second = run_pass(s, first.new_aux, with_bbl);
  CHECK(*second.new_aux.bibcite("Poincare") == "1");
  CHECK(*second.new_aux.bibcite("Ulam-1964") == "2");
  CHECK(second.labels_changed);
  PassResult third = run_pass(s, second.new_aux, with_bbl);
  CHECK(third.rendered.find("article [2] and the book [1]") != std::string::npos);
  CHECK_FALSE(third.labels_changed);
}

TEST_CASE("duplicate bibitems warn") {
  PassResult r = run_pass(scan_tex("\\begin{thebibliography}{9}\\bibitem{a}\\bibitem{a}\\end{thebibliography}"),
                          std::nullopt);
  CHECK(has(r.warnings, "Label `a' multiply defined."));
  CHECK(*r.new_aux.bibcite("a") == "1");
}

TEST_CASE("fixpoint") {
  const TexScan s = scan_tex(fig1);
  auto cold = fixpoint(s, std::nullopt, 5);
  CHECK(cold.converged);
  CHECK(cold.passes_used == 2);
  CHECK(marks(cold.passes.back().rendered) == "[2][1][2]");

  auto warm = fixpoint(s, parse_aux(fig7), 5);
  CHECK(warm.passes_used == 1);

  AuxFile tampered = parse_aux(fig7);
  tampered.set_bibcite("Poincare", "10");
  tampered.set_bibcite("Ulam-1964", "25");
  auto t = fixpoint(s, tampered, 5);
  CHECK(t.passes_used == 2);
  CHECK(marks(t.passes[0].rendered) == "[25][10][25]");
  CHECK(marks(t.passes[1].rendered) == "[2][1][2]");

  auto capped = fixpoint(s, std::nullopt, 1);
  CHECK_FALSE(capped.converged);
  CHECK(capped.passes_used == 1);
  CHECK_THROWS_AS(fixpoint(s, std::nullopt, 0), std::invalid_argument);
}

TEST_CASE("property: inline documents converge within two passes") {
  bstkit::testing::Rng rng(2718);
  using bstkit::testing::pick;
  for (int round = 0; round < 200; ++round) {
    Keys pool;
    for (int i = pick(rng, 1, 6); i > 0; --i) pool.push_back("key" + std::to_string(pool.size()));
    std::string doc = "\\begin{document}\n";
    for (int i = pick(rng, 0, 8); i > 0; --i) {
      doc += bstkit::testing::lower_word(rng) + " \\cite{" + pool[pick(rng, 0, pool.size() - 1)];
      if (pick(rng, 0, 3) == 0) doc += "," + pool[pick(rng, 0, pool.size() - 1)];
      doc += "}" + std::string(pick(rng, 0, 1) ? "\n" : " ");
    }
    doc += "\\begin{thebibliography}{9}\n";
    Keys shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (const auto& k : shuffled) doc += "\\bibitem{" + k + "} text\n";
    doc += "\\end{thebibliography}\n";

    const TexScan s = scan_tex(doc);
    std::optional<AuxFile> start;
    if (pick(rng, 0, 1)) {
      AuxFile junk;
      for (const auto& k : pool) junk.set_bibcite(k, std::to_string(pick(rng, 1, 99)));
      start = junk;
    }
    auto fx = fixpoint(s, start, 5);
    CHECK(fx.converged);
    CHECK(fx.passes_used <= 2);
    const auto& last = fx.passes.back();
    CHECK(last.undefined == 0);
    // Idempotence: feeding the result back changes nothing.
    auto again = run_pass(s, last.new_aux);
    CHECK(again.new_aux == last.new_aux);
    CHECK_FALSE(again.labels_changed);
    CHECK(again.rendered == last.rendered);
    // Every \cite is replaced and nothing else changes.
    CHECK(last.rendered.find("\\cite{") == std::string::npos);
    std::string stripped_in, stripped_out;
    std::size_t copied = 0;
    for (const auto& site : s.sites) {
      stripped_in += doc.substr(copied, site.begin - copied) + "@";
      copied = site.end;
    }
    stripped_in += doc.substr(copied);
    for (std::size_t i = 0; i < last.rendered.size(); ++i) {
      if (last.rendered[i] == '[' && last.rendered.find(']', i) != std::string::npos &&
          last.rendered.substr(i, 2) != "[?") {
        const auto close = last.rendered.find(']', i);
        const std::string inner = last.rendered.substr(i + 1, close - i - 1);
        if (!inner.empty() && inner.find_first_not_of("0123456789,") == std::string::npos) {
          stripped_out += "@";
          i = close;
          continue;
        }
      }
      stripped_out += last.rendered[i];
    }
    CHECK(stripped_out == stripped_in);
  }
}
