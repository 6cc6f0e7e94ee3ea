#include "switchcrn/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "switchcrn/json_io.hpp"

namespace switchcrn {

ModelError::ModelError(const std::string& what, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

std::uint32_t Complex::operator[](std::size_t species) const {
    auto it = counts.find(species);
    return it == counts.end() ? 0 : it->second;
}

std::uint32_t Complex::order() const {
    std::uint32_t s = 0;
    for (const auto& [k, c] : counts) s += c;
    return s;
}

void CrnSpec::validate() const {
    if (n_species == 0) throw ModelError("a network needs at least one species");
    for (std::size_t r = 0; r < reactions.size(); ++r) {
        const Reaction& rx = reactions[r];
        for (const Complex* c : {&rx.source, &rx.product})
            for (const auto& [k, n] : c->counts) {
                if (k >= n_species)
                    throw ModelError("reaction " + std::to_string(r) + " uses species index " +
                                     std::to_string(k) + " out of range");
                if (n == 0) throw ModelError("complex stores an explicit zero count");
            }
        if (rx.source == rx.product)
            throw ModelError("reaction " + std::to_string(r) + " has identical source and product");
        if (!(rx.rate > 0.0) || !std::isfinite(rx.rate))
            throw ModelError("reaction " + std::to_string(r) + " needs a positive finite rate");
    }
}

bool is_irreducible(const Matrix& q) {
    const std::size_t n = q.rows();
    if (n <= 1) return true;
    auto reach_all = [&](bool forward) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                double e = forward ? q(i, j) : q(j, i);
                if (i != j && e != 0.0 && !seen[j]) {
                    seen[j] = true;
                    ++count;
                    stack.push_back(j);
                }
            }
        }
        return count == n;
    };
    return reach_all(true) && reach_all(false);
}

Matrix complete_diagonal(Matrix q) {
    for (std::size_t i = 0; i < q.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < q.cols(); ++j)
            if (j != i) s += q(i, j);
        q(i, i) = -s;
    }
    return q;
}

void validate_q(const Matrix& q) {
    if (q.rows() == 0 || q.rows() != q.cols()) throw ModelError("Q must be a non-empty square matrix");
    for (std::size_t i = 0; i < q.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < q.cols(); ++j) {
            if (!std::isfinite(q(i, j))) throw ModelError("Q has a non-finite entry");
            if (i != j && q(i, j) < 0.0)
                throw ModelError("Q has a negative off-diagonal entry in row " + std::to_string(i + 1));
            s += q(i, j);
        }
        if (std::fabs(s) > 1e-12)
            throw ModelError("Q row " + std::to_string(i + 1) + " does not sum to zero");
    }
    if (!is_irreducible(q)) throw ModelError("Q is not irreducible");
}

SwitchedModel::SwitchedModel(std::vector<std::string> species, std::vector<CrnSpec> environments,
                             Matrix q)
    : species_(std::move(species)), envs_(std::move(environments)), q_(std::move(q)) {
    if (species_.empty()) throw ModelError("model declares no species");
    std::set<std::string> names(species_.begin(), species_.end());
    if (names.size() != species_.size()) throw ModelError("duplicate species name");
    if (envs_.empty()) throw ModelError("model has no environments");
    for (const CrnSpec& e : envs_) {
        if (e.n_species != species_.size())
            throw ModelError("environments disagree on the species set");
        e.validate();
    }
    if (q_.rows() != envs_.size())
        throw ModelError("Q dimension does not match the number of environments");
    validate_q(q_);
    q_ = complete_diagonal(q_);
}

LinearData linearize(const CrnSpec& crn) {
    crn.validate();
    const std::size_t d = crn.n_species;
    LinearData out;
    out.matrix = Matrix(d, d);
    out.inflow.assign(d, 0.0);
    out.is_at_most_monomolecular = true;
    std::map<Complex, std::pair<Vec, double>> higher;  // net drift and magnitude per source
    for (const Reaction& r : crn.reactions) {
        std::uint32_t ord = r.source.order();
        if (ord == 0) {
            for (const auto& [m, c] : r.product.counts) out.inflow[m] += r.rate * c;
        } else if (ord == 1) {
            std::size_t l = r.source.counts.begin()->first;
            for (std::size_t m = 0; m < d; ++m) {
                double change = double(r.product[m]) - double(r.source[m]);
                if (change != 0.0) out.matrix(m, l) += r.rate * change;
            }
        } else {
            out.is_at_most_monomolecular = false;
            auto& [drift, mag] = higher[r.source];
            if (drift.empty()) drift.assign(d, 0.0);
            for (std::size_t m = 0; m < d; ++m) {
                double term = r.rate * (double(r.product[m]) - double(r.source[m]));
                drift[m] += term;
                mag += std::fabs(term);
            }
        }
    }
    out.is_linear_generator = true;
    for (const auto& [src, dm] : higher)
        for (double x : dm.first)
            if (std::fabs(x) > 1e-12 * dm.second) out.is_linear_generator = false;
    return out;
}

double propensity(const Reaction& r, const State& x) {
    double p = r.rate;
    for (const auto& [m, c] : r.source.counts) {
        std::int64_t avail = x[m];
        if (avail < std::int64_t(c)) return 0.0;
        for (std::uint32_t j = 0; j < c; ++j) p *= double(avail - std::int64_t(j));
    }
    return p;
}

Vec propensities(const CrnSpec& crn, const State& x) {
    if (x.size() != crn.n_species) throw std::invalid_argument("state dimension mismatch");
    Vec out;
    out.reserve(crn.reactions.size());
    for (const Reaction& r : crn.reactions) out.push_back(propensity(r, x));
    return out;
}

std::vector<std::int64_t> reaction_delta(const Reaction& r, std::size_t n_species) {
    std::vector<std::int64_t> d(n_species, 0);
    for (const auto& [m, c] : r.product.counts) d[m] += c;
    for (const auto& [m, c] : r.source.counts) d[m] -= c;
    return d;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

const std::set<std::string> kKeywords{"species", "environment", "switching", "q"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct Token {
    enum Kind { Word, Number, Arrow, At, Plus } kind;
    std::string text;
    int col;
};

std::vector<Token> tokenize(const std::string& line, int lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        int col = int(i) + 1;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '#') {
            break;
        } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            out.push_back({Token::Arrow, "->", col});
            i += 2;
        } else if (c == '@') {
            out.push_back({Token::At, "@", col});
            ++i;
        } else if (c == '+') {
            out.push_back({Token::Plus, "+", col});
            ++i;
        } else if (ident_start(c)) {
            std::size_t j = i;
            while (j < line.size() && ident_char(line[j])) ++j;
            out.push_back({Token::Word, line.substr(i, j - i), col});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
            std::size_t j = i;
            if (line[j] == '-') ++j;
            while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.')) ++j;
            if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
                if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
                    j = k;
                    while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
                }
            }
            out.push_back({Token::Number, line.substr(i, j - i), col});
            i = j;
        } else {
            throw ModelError(std::string("unexpected character '") + c + "'", lineno, col);
        }
    }
    return out;
}

double parse_number(const Token& t, int lineno) {
    double v = 0.0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e || !std::isfinite(v))
        throw ModelError("malformed number '" + t.text + "'", lineno, t.col);
    return v;
}

long parse_int(const Token& t, int lineno) {
    long v = 0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    auto res = std::from_chars(b, e, v);
    if (t.kind != Token::Number || res.ec != std::errc() || res.ptr != e)
        throw ModelError("expected an integer, found '" + t.text + "'", lineno, t.col);
    return v;
}

class LineParser {
public:
    LineParser(std::vector<Token> toks, int lineno, int eol_col)
        : toks_(std::move(toks)), line_(lineno), eol_(eol_col) {}

    bool done() const { return pos_ >= toks_.size(); }
    const Token* peek() const { return done() ? nullptr : &toks_[pos_]; }
    const Token& next(const char* expected) {
        if (done()) fail(std::string("expected ") + expected + " before end of line", eol_);
        return toks_[pos_++];
    }
    [[noreturn]] void fail(const std::string& msg, int col) const { throw ModelError(msg, line_, col); }
    int line() const { return line_; }

    Complex complex(const std::map<std::string, std::size_t>& index) {
        Complex c;
        const Token& first = next("a complex");
        if (first.kind == Token::Number && first.text == "0" &&
            (done() || peek()->kind != Token::Word)) {
            return c;
        }
        --pos_;
        while (true) {
            const Token& t = next("a species term");
            long coeff = 1;
            const Token* name = &t;
            if (t.kind == Token::Number) {
                coeff = parse_int(t, line_);
                if (coeff <= 0) fail("stoichiometric coefficient must be positive", t.col);
                name = &next("a species name");
            }
            if (name->kind != Token::Word) fail("expected a species name, found '" + name->text + "'", name->col);
            auto it = index.find(name->text);
            if (it == index.end()) fail("undeclared species '" + name->text + "'", name->col);
            c.counts[it->second] += static_cast<std::uint32_t>(coeff);
            if (done() || peek()->kind != Token::Plus) break;
            ++pos_;
        }
        return c;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int line_;
    int eol_;
};

}  // namespace

SwitchedModel parse_model(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::vector<std::string> species;
    std::map<std::string, std::size_t> index;
    std::vector<CrnSpec> envs;
    std::vector<std::tuple<long, long, double, int>> qlines;
    enum class Section { Start, Env, Switching } section = Section::Start;

    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        auto toks = tokenize(raw, lineno);
        if (toks.empty()) continue;
        LineParser lp(toks, lineno, int(raw.size()) + 1);
        const Token& head = lp.next("a statement");

        if (section == Section::Start) {
            if (head.kind != Token::Word || head.text != "species")
                lp.fail("the first statement must be 'species'", head.col);
            while (!lp.done()) {
                const Token& t = lp.next("a species name");
                if (t.kind != Token::Word) lp.fail("expected a species name, found '" + t.text + "'", t.col);
                if (kKeywords.count(t.text)) lp.fail("'" + t.text + "' is reserved", t.col);
                if (index.count(t.text)) lp.fail("duplicate species '" + t.text + "'", t.col);
                index[t.text] = species.size();
                species.push_back(t.text);
            }
            if (species.empty()) lp.fail("'species' needs at least one name", head.col);
            section = Section::Env;
            continue;
        }

        if (head.kind == Token::Word && head.text == "species")
            lp.fail("'species' may appear only once", head.col);

        if (head.kind == Token::Word && head.text == "environment") {
            if (section == Section::Switching)
                lp.fail("environments must precede the switching section", head.col);
            const Token& k = lp.next("an environment number");
            long num = parse_int(k, lineno);
            if (num != long(envs.size()) + 1)
                lp.fail("expected environment " + std::to_string(envs.size() + 1), k.col);
            if (!lp.done()) lp.fail("unexpected text after environment number", lp.peek()->col);
            envs.push_back(CrnSpec{species.size(), {}});
            continue;
        }

        if (head.kind == Token::Word && head.text == "switching") {
            if (section == Section::Switching) lp.fail("duplicate switching section", head.col);
            if (!lp.done()) lp.fail("unexpected text after 'switching'", lp.peek()->col);
            section = Section::Switching;
            continue;
        }

        if (section == Section::Switching) {
            if (head.kind != Token::Word || head.text != "q")
                lp.fail("expected 'q <i> <j> <rate>' in the switching section", head.col);
            const Token& ti = lp.next("a source environment");
            const Token& tj = lp.next("a target environment");
            const Token& tr = lp.next("a switching rate");
            long i = parse_int(ti, lineno);
            long j = parse_int(tj, lineno);
            double rate = parse_number(tr, lineno);
            if (i < 1 || i > long(envs.size())) lp.fail("environment index out of range", ti.col);
            if (j < 1 || j > long(envs.size())) lp.fail("environment index out of range", tj.col);
            if (i == j) lp.fail("switching rates need distinct environments", tj.col);
            if (rate < 0.0) lp.fail("switching rate must be non-negative", tr.col);
            if (!lp.done()) lp.fail("unexpected text after switching rate", lp.peek()->col);
            for (const auto& ql : qlines)
                if (std::get<0>(ql) == i && std::get<1>(ql) == j)
                    lp.fail("duplicate switching rate", head.col);
            qlines.emplace_back(i, j, rate, lineno);
            continue;
        }

        if (envs.empty()) lp.fail("reaction outside of an environment section", head.col);
        // reaction line: rewind by reparsing from scratch
        LineParser rp(tokenize(raw, lineno), lineno, int(raw.size()) + 1);
        Reaction r;
        r.source = rp.complex(index);
        const Token& arrow = rp.next("'->'");
        if (arrow.kind != Token::Arrow) rp.fail("expected '->', found '" + arrow.text + "'", arrow.col);
        r.product = rp.complex(index);
        const Token& at = rp.next("'@'");
        if (at.kind != Token::At) rp.fail("expected '@', found '" + at.text + "'", at.col);
        const Token& rt = rp.next("a rate constant");
        if (rt.kind != Token::Number) rp.fail("expected a rate constant, found '" + rt.text + "'", rt.col);
        r.rate = parse_number(rt, lineno);
        if (!(r.rate > 0.0)) rp.fail("rate constant must be positive", rt.col);
        if (!rp.done()) rp.fail("unexpected text after rate constant", rp.peek()->col);
        if (r.source == r.product) rp.fail("source and product complexes are identical", head.col);
        envs.back().reactions.push_back(std::move(r));
    }

    if (section == Section::Start) throw ModelError("missing 'species' declaration", lineno + 1, 1);
    if (envs.empty()) throw ModelError("model declares no environments", lineno + 1, 1);
    Matrix q(envs.size(), envs.size());
    for (const auto& [i, j, rate, ln] : qlines) q(i - 1, j - 1) = rate;
    q = complete_diagonal(q);
    return SwitchedModel(std::move(species), std::move(envs), std::move(q));
}

std::string complex_to_string(const Complex& c, const std::vector<std::string>& species) {
    if (c.counts.empty()) return "0";
    std::string s;
    for (const auto& [m, n] : c.counts) {
        if (!s.empty()) s += " + ";
        if (n != 1) s += std::to_string(n) + " ";
        s += species.at(m);
    }
    return s;
}

std::string emit_model(const SwitchedModel& model) {
    std::ostringstream out;
    out << "species";
    for (const auto& s : model.species()) out << ' ' << s;
    out << '\n';
    for (std::size_t i = 0; i < model.n_env(); ++i) {
        out << "environment " << i + 1 << '\n';
        for (const Reaction& r : model.environment(i).reactions)
            out << complex_to_string(r.source, model.species()) << " -> "
                << complex_to_string(r.product, model.species()) << " @ " << format_double(r.rate)
                << '\n';
    }
    if (model.n_env() > 1) {
        out << "switching\n";
        for (std::size_t i = 0; i < model.n_env(); ++i)
            for (std::size_t j = 0; j < model.n_env(); ++j)
                if (i != j && model.q()(i, j) != 0.0)
                    out << "q " << i + 1 << ' ' << j + 1 << ' ' << format_double(model.q()(i, j)) << '\n';
    }
    return out.str();
}

SwitchedModel load_model_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open model file '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    return is_json ? model_from_json_text(buf.str()) : parse_model(buf.str());
}

}  // namespace switchcrn
