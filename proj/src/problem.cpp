#include "perov/problem.hpp"

#include "perov/errors.hpp"
#include "perov/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace perov {

ParseError::ParseError(const std::string& origin, std::size_t line, const std::string& field,
                       const std::string& what)
    : std::runtime_error(origin + ":" + std::to_string(line) +
                         (field.empty() ? "" : ": " + field) + ": " + what),
      line_(line), field_(field)
{
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

struct Entry {
    std::size_t line;
    std::string value;
};

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = [] {
        std::set<std::string> k = {"n",  "W",   "k",      "lambda", "x0",
                                   "eps", "budget", "seed", "samples"};
        for (const char* prefix : {"f", "g", "gsolve"})
            for (const char* field : {"kind", "M", "b", "L", "d", "tags"})
                k.insert(std::string(prefix) + "." + field);
        return k;
    }();
    return keys;
}

class Parser {
public:
    Parser(std::string_view text, std::string origin) : origin_(std::move(origin))
    {
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto end = text.find('\n', start);
            std::string_view line = text.substr(start, end - start);
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (!line.empty()) read_line(line, line_no);
            if (end == std::string_view::npos) break;
            start = end + 1;
        }
    }

    ProblemFile build()
    {
        ProblemFile p;
        p.n = integer("n", true).value();
        if (p.n == 0) fail("n", "dimension must be positive");
        n_ = p.n;

        p.W = matrix("W", true).value();
        for (std::size_t i = 0; i < p.n; ++i)
            for (std::size_t j = 0; j < p.n; ++j)
                if (!(p.W(i, j) > 0.0))
                    fail("W", "metric weights must be strictly positive");

        p.f = map("f");
        p.g = map("g");
        p.g_solve = map("gsolve");
        if (p.g_solve && !p.g) fail("gsolve", "given without g");
        if (p.g && !p.g_solve) {
            if (!p.g->is_affine()) fail("g.kind", "non-affine g requires gsolve.*");
            if (!invert_affine(*p.g)) fail("g.M", "affine g is singular and no gsolve.* is given");
        }

        p.k = matrix("k", false);
        p.lambda = matrix("lambda", false);
        if (p.k.has_value() == p.lambda.has_value())
            fail(p.k ? "lambda" : "k", "exactly one of k and lambda must be given");

        p.x0 = vector("x0", false).value_or(ModuleVector(p.n));
        read_eps(p);
        if (auto b = integer("budget", false)) {
            if (*b == 0) fail("budget", "must be >= 1");
            p.budget = *b;
        }
        if (auto s = integer("seed", false)) p.seed = *s;
        if (auto s = integer("samples", false)) {
            if (*s == 0) fail("samples", "must be >= 1");
            p.samples = *s;
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        const auto it = entries_.find(key);
        throw ParseError(origin_, it == entries_.end() ? 0 : it->second.line, key, what);
    }

    void read_line(std::string_view line, std::size_t line_no)
    {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(origin_, line_no, "", "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ParseError(origin_, line_no, "", "missing key");
        if (!known_keys().count(key)) throw ParseError(origin_, line_no, key, "unknown key");
        if (entries_.count(key)) throw ParseError(origin_, line_no, key, "duplicate key");
        if (value.empty()) throw ParseError(origin_, line_no, key, "missing value");
        entries_.emplace(key, Entry{line_no, value});
    }

    const Entry* find(const std::string& key, bool required) const
    {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            if (required) throw ParseError(origin_, 0, key, "required key is missing");
            return nullptr;
        }
        return &it->second;
    }

    double number(const std::string& key, std::string_view tok) const
    {
        if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
        double x = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            fail(key, "malformed number '" + std::string(tok) + "'");
        if (!std::isfinite(x)) fail(key, "number must be finite");
        return x;
    }

    std::optional<std::size_t> integer(const std::string& key, bool required) const
    {
        const Entry* e = find(key, required);
        if (!e) return std::nullopt;
        std::uint64_t x = 0;
        const std::string& s = e->value;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            fail(key, "expected a nonnegative integer");
        return static_cast<std::size_t>(x);
    }

    std::vector<double> numbers(const std::string& key, std::string_view text) const
    {
        std::vector<double> out;
        for (auto tok : split(text, ',')) out.push_back(number(key, tok));
        return out;
    }

    std::optional<ModuleVector> vector(const std::string& key, bool required) const
    {
        const Entry* e = find(key, required);
        if (!e) return std::nullopt;
        std::vector<double> v = numbers(key, e->value);
        if (n_ && v.size() != n_)
            fail(key, "expected " + std::to_string(n_) + " entries, got " +
                          std::to_string(v.size()));
        return ModuleVector(std::move(v));
    }

    std::optional<SquareMatrix> matrix(const std::string& key, bool required)
    {
        const Entry* e = find(key, required);
        if (!e) return std::nullopt;
        std::vector<std::vector<double>> rows;
        for (auto row : split(e->value, ';')) rows.push_back(numbers(key, row));
        if (n_ && rows.size() != n_)
            fail(key, "expected " + std::to_string(n_) + " rows, got " +
                          std::to_string(rows.size()));
        for (const auto& r : rows)
            if (r.size() != rows.size()) fail(key, "matrix is not square");
        return SquareMatrix::from_rows(rows);
    }

    std::optional<MapSpec> map(const std::string& prefix)
    {
        const auto key = [&](const char* field) { return prefix + "." + field; };
        bool any = false;
        for (const char* field : {"kind", "M", "b", "L", "d", "tags"})
            any = any || entries_.count(key(field));
        if (!any) return std::nullopt;

        std::string kind = "affine";
        if (const Entry* e = find(key("kind"), false)) kind = e->value;
        SquareMatrix M = matrix(key("M"), true).value();
        ModuleVector b = vector(key("b"), true).value();
        if (kind == "affine") {
            for (const char* field : {"L", "d", "tags"})
                if (entries_.count(key(field))) fail(key(field), "only valid for nonlinear maps");
            return MapSpec::affine(std::move(M), std::move(b));
        }
        if (kind != "nonlinear") fail(key("kind"), "expected 'affine' or 'nonlinear'");

        SquareMatrix L = matrix(key("L"), true).value();
        ModuleVector d = vector(key("d"), true).value();
        std::vector<UnaryFn> tags;
        for (auto tok : split(find(key("tags"), true)->value, ',')) {
            try {
                tags.push_back(unary_fn_from_string(tok));
            } catch (const UsageError& err) {
                fail(key("tags"), err.what());
            }
        }
        if (tags.size() != n_)
            fail(key("tags"), "expected " + std::to_string(n_) + " tags");
        return MapSpec::nonlinear(AffineMap{std::move(M), std::move(b)},
                                  AffineMap{std::move(L), std::move(d)}, std::move(tags));
    }

    void read_eps(ProblemFile& p) const
    {
        const Entry* e = find("eps", false);
        if (!e) {
            p.eps = ModuleVector::constant(p.n, 1e-10);
            p.eps_scalar = true;
            return;
        }
        std::vector<double> v = numbers("eps", e->value);
        if (v.size() == 1 && p.n != 1) {
            p.eps = ModuleVector::constant(p.n, v[0]);
            p.eps_scalar = true;
        } else if (v.size() == p.n) {
            p.eps = ModuleVector(std::move(v));
            p.eps_scalar = p.n == 1;
        } else {
            fail("eps", "expected a scalar or " + std::to_string(p.n) + " entries");
        }
        for (double c : p.eps.values())
            if (!(c > 0.0)) fail("eps", "tolerance entries must be strictly positive");
    }

    std::size_t n_ = 0;
    std::string origin_;
    std::map<std::string, Entry> entries_;
};

void emit_map(std::ostringstream& os, const std::string& prefix, const MapSpec& m)
{
    os << prefix << ".kind = " << (m.is_affine() ? "affine" : "nonlinear") << '\n';
    os << prefix << ".M = " << format_matrix(m.outer().M, true) << '\n';
    os << prefix << ".b = " << format_vector(m.outer().b, true) << '\n';
    if (!m.is_affine()) {
        os << prefix << ".L = " << format_matrix(m.inner().M, true) << '\n';
        os << prefix << ".d = " << format_vector(m.inner().b, true) << '\n';
        os << prefix << ".tags = ";
        for (std::size_t i = 0; i < m.tags().size(); ++i)
            os << (i ? "," : "") << to_string(m.tags()[i]);
        os << '\n';
    }
}

} // namespace

ProblemFile parse_problem_text(std::string_view text, const std::string& origin)
{
    return Parser(text, origin).build();
}

ProblemFile parse_problem(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "", "cannot open problem file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str(), path);
}

std::string emit_problem(const ProblemFile& p)
{
    std::ostringstream os;
    os << "n = " << p.n << '\n';
    os << "W = " << format_matrix(p.W, true) << '\n';
    if (p.f) emit_map(os, "f", *p.f);
    if (p.g) emit_map(os, "g", *p.g);
    if (p.g_solve) emit_map(os, "gsolve", *p.g_solve);
    if (p.k) os << "k = " << format_matrix(*p.k, true) << '\n';
    if (p.lambda) os << "lambda = " << format_matrix(*p.lambda, true) << '\n';
    os << "x0 = " << format_vector(p.x0, true) << '\n';
    if (p.eps_scalar)
        os << "eps = " << format_shortest(p.eps[0]) << '\n';
    else
        os << "eps = " << format_vector(p.eps, true) << '\n';
    os << "budget = " << p.budget << '\n';
    os << "seed = " << p.seed << '\n';
    os << "samples = " << p.samples << '\n';
    return os.str();
}

} // namespace perov
