#include "perov/errors.hpp"
#include "perov/problem.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace perov;

namespace {

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ParseError parse_error_of(const std::string& text)
{
    try {
        parse_problem_text(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a parse error for:\n" << text);
    return ParseError("", 0, "", "");
}

const char* kScalar = R"(n = 1
W = 1
f.kind = affine
f.M = 0.5
f.b = 1
k = 0.5
x0 = 0
eps = 1e-10
)";

} // namespace

TEST_CASE("minimal scalar file")
{
    const ProblemFile p = parse_problem_text(kScalar);
    CHECK(p.n == 1);
    CHECK(p.W == SquareMatrix{{1}});
    REQUIRE(p.f.has_value());
    CHECK(p.f->is_affine());
    CHECK((*p.f)(ModuleVector{2}) == ModuleVector{2});
    CHECK(p.k == SquareMatrix{{0.5}});
    CHECK_FALSE(p.lambda.has_value());
    CHECK(p.eps == ModuleVector{1e-10});
    CHECK(p.budget == 100000);
    CHECK(p.seed == 1);
}

TEST_CASE("matrix, vector and eps forms")
{
    const ProblemFile p = parse_problem_text(R"(
        # comment line
        n = 2
        W = 1, 0.5 ; 0.5, 1      # trailing comment
        f.M = 0.5,0.25; 0.25,0.5
        f.b = 1,1
        lambda = 0.5,0; 0,0.5
        eps = 1e-8, 2e-8
        budget = 17
        seed = 42
        samples = 5
    )");
    CHECK(p.W == SquareMatrix{{1, 0.5}, {0.5, 1}});
    CHECK(p.lambda == SquareMatrix{{0.5, 0}, {0, 0.5}});
    CHECK(p.eps == ModuleVector{1e-8, 2e-8});
    CHECK_FALSE(p.eps_scalar);
    CHECK(p.x0 == ModuleVector{0, 0});
    CHECK(p.budget == 17);
    CHECK(p.seed == 42);
    CHECK(p.samples == 5);

    const ProblemFile q = parse_problem_text("n = 3\nW = 1,1,1;1,1,1;1,1,1\nk = 0,0,0;0,0,0;0,0,0\neps = 1e-6\n");
    CHECK(q.eps == ModuleVector{1e-6, 1e-6, 1e-6});
    CHECK(q.eps_scalar);
}

TEST_CASE("nonlinear maps and g_solve")
{
    const ProblemFile p = parse_problem_text(R"(n = 2
W = 1,1;1,1
f.kind = nonlinear
f.M = 0.3,0; 0,0.3
f.b = 0,0
f.L = 1,0; 0,1
f.d = 0,0
f.tags = tanh,atan
g.kind = nonlinear
g.M = 1,0;0,1
g.b = 0,0
g.L = 1,0;0,1
g.d = 0,0
g.tags = identity,identity
gsolve.M = 1,0;0,1
gsolve.b = 0,0
k = 0.3,0;0,0.3
)");
    REQUIRE(p.f.has_value());
    CHECK_FALSE(p.f->is_affine());
    CHECK(p.f->tags() == std::vector<UnaryFn>{UnaryFn::tanh, UnaryFn::atan});
    CHECK(p.g_solve.has_value());
}

TEST_CASE("affine g without gsolve is inverted only when regular")
{
    std::string text = std::string(kScalar) + "g.M = 2\ng.b = 0\n";
    CHECK_NOTHROW(parse_problem_text(text));
    CHECK(parse_error_of(std::string(kScalar) + "g.M = 0\ng.b = 0\n").field() == "g.M");
}

TEST_CASE("parse errors carry line and field")
{
    SUBCASE("k and lambda both present")
    {
        const ParseError e = parse_error_of(std::string(kScalar) + "lambda = 0.5\n");
        CHECK((e.field() == "k" || e.field() == "lambda"));
    }
    SUBCASE("neither k nor lambda")
    {
        CHECK_THROWS_AS(parse_problem_text("n = 1\nW = 1\n"), ParseError);
    }
    SUBCASE("zero weight")
    {
        const ParseError e = parse_error_of("n = 2\nW = 1,0; 1,1\nk = 0,0;0,0\n");
        CHECK(e.field() == "W");
        CHECK(e.line() == 2);
    }
    SUBCASE("negative weight")
    {
        CHECK(parse_error_of("n = 1\nW = -1\nk = 0\n").field() == "W");
    }
    SUBCASE("unknown key")
    {
        const ParseError e = parse_error_of("n = 1\nW = 1\nkk = 0.5\n");
        CHECK(e.field() == "kk");
        CHECK(e.line() == 3);
    }
    SUBCASE("duplicate key")
    {
        CHECK(parse_error_of("n = 1\nn = 1\nW = 1\nk = 0\n").line() == 2);
    }
    SUBCASE("dimension mismatch")
    {
        CHECK(parse_error_of("n = 2\nW = 1,1;1,1\nk = 0,0;0,0\nx0 = 1,2,3\n").field() == "x0");
        CHECK(parse_error_of("n = 2\nW = 1,1;1,1\nk = 0\n").field() == "k");
        CHECK(parse_error_of("n = 2\nW = 1,1;1\nk = 0,0;0,0\n").field() == "W");
    }
    SUBCASE("malformed numbers")
    {
        CHECK(parse_error_of("n = 1\nW = 1x\nk = 0\n").field() == "W");
        CHECK(parse_error_of("n = 1\nW = nan\nk = 0\n").field() == "W");
        CHECK(parse_error_of("n = one\nW = 1\nk = 0\n").field() == "n");
    }
    SUBCASE("bad tolerance")
    {
        std::string text = kScalar;
        text.replace(text.find("eps = 1e-10"), 11, "eps = 0");
        CHECK(parse_error_of(text).field() == "eps");
    }
    SUBCASE("missing equals sign")
    {
        CHECK(parse_error_of("n = 1\nW 1\n").line() == 2);
    }
    SUBCASE("unknown tag")
    {
        CHECK(parse_error_of("n = 1\nW = 1\nk = 0\nf.kind = nonlinear\nf.M = 1\nf.b = 0\nf.L = 1\n"
                             "f.d = 0\nf.tags = exp\n")
                  .field() == "f.tags");
    }
    SUBCASE("gsolve without g")
    {
        CHECK(parse_error_of(std::string(kScalar) + "gsolve.M = 1\ngsolve.b = 0\n").field() ==
              "gsolve");
    }
    SUBCASE("non-affine g without gsolve")
    {
        CHECK(parse_error_of(std::string(kScalar) +
                             "g.kind = nonlinear\ng.M = 1\ng.b = 0\ng.L = 1\ng.d = 0\ng.tags = sin\n")
                  .field() == "g.kind");
    }
}

TEST_CASE("missing file is a parse error")
{
    CHECK_THROWS_AS(parse_problem("/nonexistent/file.prob"), ParseError);
}

TEST_CASE("emit then parse reproduces every shipped problem")
{
    int checked = 0;
    for (const auto& entry : std::filesystem::directory_iterator(PEROV_PROBLEM_DIR)) {
        if (entry.path().extension() != ".prob") continue;
        ProblemFile p;
        try {
            p = parse_problem(entry.path().string());
        } catch (const ParseError&) {
            continue; // the deliberately malformed examples
        }
        INFO(entry.path().filename().string());
        const std::string text = emit_problem(p);
        const ProblemFile q = parse_problem_text(text);
        CHECK(q == p);
        CHECK(emit_problem(q) == text);
        ++checked;
    }
    CHECK(checked >= 15);
}

TEST_CASE("emit preserves awkward doubles")
{
    ProblemFile p = parse_problem_text(kScalar);
    p.f = MapSpec::affine(SquareMatrix{{0.1 + 0.2}}, ModuleVector{1.0 / 3});
    p.x0 = ModuleVector{-5e-324};
    p.eps = ModuleVector{2.2250738585072014e-308};
    p.eps_scalar = true;
    CHECK(parse_problem_text(emit_problem(p)) == p);
}

TEST_CASE("shipped malformed example reports the weight line")
{
    const std::string text = read_file(std::filesystem::path(PEROV_PROBLEM_DIR) / "bad_weights.prob");
    CHECK(parse_error_of(text).field() == "W");
}
