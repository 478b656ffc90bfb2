#include "doctest.h"

#include "padic_cli/commands.hpp"
#include "padic_cli/spec.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace padic;
using namespace padic::cli;

namespace {

const std::string spec_dir = PADIC_SPEC_DIR;

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> shipped_specs() {
  std::vector<std::string> out;
  for (const auto &e : std::filesystem::directory_iterator(spec_dir))
    if (e.path().extension() == ".spec")
      out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

SpecError spec_error(const std::string &text) {
  try {
    parse_spec(text);
  } catch (const SpecError &e) {
    return e;
  }
  FAIL("expected a spec error");
  return SpecError("", 0, 0, "");
}

} // namespace

TEST_CASE("minimal context-only spec") {
  const auto f = parse_spec("context L {\n  p = 7\n  precision = 9\n}\n");
  REQUIRE(f.contexts.size() == 1);
  const auto &ctx = f.contexts.at("L");
  CHECK(ctx->p() == 7);
  CHECK(ctx->precision() == 9);
  CHECK(ctx->e() == 1);
  CHECK(ctx->f() == 1);
  CHECK(f.audits.empty());

  const auto g = parse_spec("context L {\n  p = 3\n  f = 2\n  precision = 5\n}\n"
                            "context E {\n  ramified_over = L\n  r = 3\n}\n");
  CHECK(g.contexts.at("L")->f() == 2);
  CHECK(g.contexts.at("E")->e() == 3);
  CHECK(g.contexts.at("E")->f() == 2);
  CHECK(g.contexts.at("E")->precision() == 15);
}

TEST_CASE("diagnostics carry kind and location") {
  auto e = spec_error("context L {\n  p = 5\n  precision = 8\n}\n"
                      "family f {\n  model = missing\n  group = free(g)\n  g = [[1]]\n}\n");
  CHECK(e.kind == "unresolved-reference");
  CHECK(e.line == 6);
  CHECK(e.column == 11);

  e = spec_error("context L {\n  p = 5\n  precision = 8\n");
  CHECK(e.kind == "syntax");
  CHECK(e.line == 1);

  e = spec_error("context L {\n  p = 5\n  precision = 8 9\n}\n");
  CHECK(e.kind == "syntax");
  CHECK(e.line == 3);

  e = spec_error("context L {\n  p = 5\n  precision = 8\n  colour = red\n}\n");
  CHECK(e.kind == "syntax");
  CHECK(e.line == 4);

  // 6 is not prime: the context constructor refuses it
  e = spec_error("context L {\n  p = 6\n  precision = 8\n}\n");
  CHECK(e.kind == "invariant");
  CHECK(e.line == 1);

  // unbalanced brackets report the value start
  e = spec_error("context L {\n  p = 5\n  precision = 8\n}\nmodel m {\n  context = L\n"
                 "  open = [T\n}\n");
  CHECK(e.kind == "syntax");
  CHECK(e.line == 7);
  CHECK(e.column == 10);

  // a relation that fails for the given matrices
  e = spec_error("context L {\n  p = 5\n  precision = 8\n}\nrep r {\n  context = L\n"
                 "  group = cyclic(2)\n  g = [[2]]\n}\n");
  CHECK(e.kind == "invariant");
  CHECK(e.line == 5);
}

TEST_CASE("the shipped 1+T spec builds the unramified family") {
  const auto f = load_spec(spec_dir + "/unramified_1pT.spec");
  REQUIRE(f.families.count("frob"));
  const auto &fam = f.families.at("frob");
  CHECK(fam.dim == 1);
  CHECK(fam.group.kind() == GroupPresentation::Kind::Free);
  const auto &m = fam.model;
  const Series expected = Series::constant(m, 1) + Series::variable(m, "T");
  CHECK(fam.gens[0](0, 0).equals(expected));
  const auto &dom = f.domains.at("U2");
  CHECK(dom.kind == DomainKind::WideOpenU);
  CHECK(dom.n == 2);
  const auto &a = f.audit("");
  CHECK(a.extensions == std::vector<std::string>{"Q5", "E2", "Q25"});
  CHECK(a.seed == 7);
}

TEST_CASE("round trip on shipped specs") {
  const auto files = shipped_specs();
  REQUIRE(files.size() >= 4);
  for (const auto &path : files) {
    CAPTURE(path);
    const auto text = slurp(path);
    const auto t = parse_tree(text);
    const auto printed = print_tree(t);
    CHECK(parse_tree(printed) == t);
    CHECK(print_tree(parse_tree(printed)) == printed);
    const auto a = parse_spec(text), b = parse_spec(printed);
    CHECK(a.contexts.size() == b.contexts.size());
    CHECK(a.models.size() == b.models.size());
    CHECK(a.points.size() == b.points.size());
    CHECK(a.domains.size() == b.domains.size());
    CHECK(a.reps.size() == b.reps.size());
    CHECK(a.families.size() == b.families.size());
    CHECK(a.pseudoreps.size() == b.pseudoreps.size());
    CHECK(a.audits.size() == b.audits.size());
    for (const auto &[name, fam] : a.families) {
      const auto &other = b.families.at(name);
      REQUIRE(fam.gens.size() == other.gens.size());
      for (size_t g = 0; g < fam.gens.size(); ++g)
        for (size_t i = 0; i < fam.gens[g].a.size(); ++i)
          CHECK(fam.gens[g].a[i].str() == other.gens[g].a[i].str());
    }
  }
}

TEST_CASE("round trip on random trees") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> values = {"5", "[1, 2, 3]", "[[1 + T, 0], [0, 1]]",
                                           "free(g, h)", "pi^2 - 3*pi", "name_1"};
  for (int trial = 0; trial < 200; ++trial) {
    SpecTree t;
    const int nb = 1 + static_cast<int>(rng() % 4);
    for (int b = 0; b < nb; ++b) {
      Block blk;
      blk.kind = "k" + std::to_string(rng() % 3);
      blk.name = (rng() % 4 == 0) ? "" : "b" + std::to_string(b);
      const int ne = static_cast<int>(rng() % 5);
      for (int e = 0; e < ne; ++e)
        blk.entries.push_back({"key" + std::to_string(e), values[rng() % values.size()], 0, 0});
      t.blocks.push_back(blk);
    }
    CHECK(parse_tree(print_tree(t)) == t);
  }
}

TEST_CASE("expressions agree with element arithmetic") {
  const auto ctx = Context::eisenstein(3, {3, 0, 1}, 12); // pi^2 = -3
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    Element value = Element::from_int(ctx, 0);
    const int terms = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < terms; ++i) {
      const i64 c = static_cast<i64>(rng() % 41) - 20;
      const int k = static_cast<int>(rng() % 5);
      text += (i ? " + " : "") + std::string("(") + std::to_string(c) + ")*pi^" +
              std::to_string(k);
      value = value + Element::from_int(ctx, c) * Element::pi(ctx).pow(k);
    }
    CAPTURE(text);
    CHECK(parse_element(text, ctx).equals(value));
  }
  // p is the rational prime, not the uniformizer
  CHECK(parse_element("p", ctx).equals(Element::pi(ctx).pow(2) * Element::from_int(ctx, -1)));
  CHECK(parse_element("-(2 - 5)^3", ctx).equals(Element::from_int(ctx, 27)));
  CHECK_THROWS_AS(parse_element("2 *", ctx), SpecError);
  CHECK_THROWS_AS(parse_element("q + 1", ctx), SpecError);
}

TEST_CASE("group literals") {
  CHECK(parse_group("free(a, b)").ngens() == 2);
  CHECK(parse_group("cyclic(6)").order() == 6);
  CHECK(parse_group("symmetric(4)").order() == 24);
  const auto d4 = parse_group("perms(r = [1, 2, 3, 0], s = [3, 2, 1, 0])");
  CHECK(d4.order() == 8);
  CHECK_THROWS_AS(parse_group("dihedral(4)"), SpecError);
}

TEST_CASE("precision override") {
  const auto f = load_spec(spec_dir + "/unramified_1pT.spec", 6);
  CHECK(f.contexts.at("Q5")->precision() == 6);
  CHECK(f.contexts.at("E2")->precision() == 12);
}

TEST_CASE("run: documented examples and exit codes") {
  auto r = run({"bounds", "gamma", "--e", "2", "--n", "3"});
  CHECK(r.exit_code == Pass);
  CHECK(r.report["gamma"] == 5);

  r = run({"family", "audit", "--spec", spec_dir + "/unramified_1pT.spec", "--single-thread"});
  CHECK(r.exit_code == Pass);
  CHECK(r.report["verdict"] == "pass");

  r = run({"family", "audit", "--spec", spec_dir + "/unramified_1pT_outside.spec"});
  CHECK(r.exit_code == Fail);
  CHECK(r.report["verdict"] == "fail");
  REQUIRE(r.report.contains("witness"));
  CHECK(r.report["witness"]["b"]["coords"][0] == "5");

  r = run({"bounds", "gamma", "--e", "2"});
  CHECK(r.exit_code == UsageError);
  r = run({"family", "audit"});
  CHECK(r.exit_code == UsageError);
  r = run({"nosuch"});
  CHECK(r.exit_code == UsageError);

  // the split rep is not isomorphic to the standard one mod 5
  r = run({"lattice", "iso", "--spec", spec_dir + "/s3_lattices.spec", "--other", "split"});
  CHECK(r.exit_code == Fail);
  r = run({"lattice", "carayol", "--spec", spec_dir + "/s3_lattices.spec"});
  CHECK(r.exit_code == Pass);

  // rationals travel as {num, den}
  r = run({"bounds", "sst-bound", "--k", "5", "--p", "3", "--n", "1"});
  CHECK(r.exit_code == Pass);
  CHECK(r.report["bound"]["num"] == -3);
  CHECK(r.report["bound"]["den"] == 2);
}

TEST_CASE("reports are byte-stable") {
  const std::vector<std::vector<std::string>> cmds = {
      {"family", "audit", "--spec", spec_dir + "/unramified_1pT.spec", "--single-thread"},
      {"family", "audit", "--spec", spec_dir + "/unramified_1pT_outside.spec", "--single-thread"},
      {"domain", "sample", "--spec", spec_dir + "/pseudorep_family.spec", "--seed", "3"},
      {"pseudorep", "audit", "--spec", spec_dir + "/pseudorep_family.spec", "--single-thread"},
      {"lattice", "carayol", "--spec", spec_dir + "/s3_lattices.spec", "--single-thread"},
      {"phimod", "wadm", "--k", "3", "--p", "5", "--ap", "5"},
  };
  for (const auto &c : cmds) {
    CAPTURE(c[0] + " " + c[1]);
    const auto a = render(run(c).report), b = render(run(c).report);
    CHECK(a == b);
  }
}
