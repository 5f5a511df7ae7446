#include "atwist/manifest.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "atwist/errors.hpp"
#include "atwist/parser.hpp"

namespace atwist {

namespace {

[[noreturn]] void fail(ParseErrorKind kind, int line, int col, const std::string& token,
                       const std::string& msg) {
    throw ParseError(kind, line, col, token, msg);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_identifier(const std::string& s) {
    if (s.empty() || !ident_start(s[0])) return false;
    for (char c : s)
        if (!ident_char(c)) return false;
    return true;
}

// A "key = value" line inside a section. Columns are 1-based file columns.
struct Entry {
    std::string key;
    std::string value;
    int line = 1;
    int key_col = 1;
    int value_col = 1;
};

struct Section {
    std::string name;
    int line = 1;
    std::vector<Entry> entries;
};

// The grammar has no string literals, so '#' always starts a comment.
std::string_view strip_comment(std::string_view s) {
    auto hash = s.find('#');
    if (hash != std::string_view::npos) s = s.substr(0, hash);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

void take_line(std::string_view raw, int line_no, std::vector<Section>& sections) {
    std::string_view sv = strip_comment(raw);
    size_t first = 0;
    while (first < sv.size() && std::isspace(static_cast<unsigned char>(sv[first]))) ++first;
    if (first >= sv.size()) return; // blank or comment-only

    if (sv[first] == '[') {
        size_t close = sv.find(']', first);
        if (close == std::string_view::npos)
            fail(ParseErrorKind::Syntax, line_no, static_cast<int>(first) + 1, "[",
                 "unterminated section header");
        std::string name(sv.substr(first + 1, close - first - 1));
        if (!is_identifier(name))
            fail(ParseErrorKind::Syntax, line_no, static_cast<int>(first) + 2, name,
                 "section name must be an identifier");
        for (size_t k = close + 1; k < sv.size(); ++k)
            if (!std::isspace(static_cast<unsigned char>(sv[k])))
                fail(ParseErrorKind::Syntax, line_no, static_cast<int>(k) + 1,
                     std::string(1, sv[k]), "unexpected text after section header");
        sections.push_back(Section{name, line_no, {}});
        return;
    }

    if (sections.empty())
        fail(ParseErrorKind::Syntax, line_no, static_cast<int>(first) + 1,
             std::string(1, sv[first]), "content before the first [section] header");

    size_t eq = sv.find('=', first);
    if (eq == std::string_view::npos)
        fail(ParseErrorKind::Syntax, line_no, static_cast<int>(first) + 1,
             std::string(sv.substr(first)), "expected 'key = value'");
    size_t kend = eq;
    while (kend > first && std::isspace(static_cast<unsigned char>(sv[kend - 1]))) --kend;
    if (kend == first)
        fail(ParseErrorKind::Syntax, line_no, static_cast<int>(eq) + 1, "=",
             "missing key before '='");
    size_t vstart = eq + 1;
    while (vstart < sv.size() && std::isspace(static_cast<unsigned char>(sv[vstart]))) ++vstart;

    Entry e;
    e.key = std::string(sv.substr(first, kend - first));
    e.value = std::string(sv.substr(vstart));
    e.line = line_no;
    e.key_col = static_cast<int>(first) + 1;
    e.value_col = static_cast<int>(vstart) + 1;
    sections.back().entries.push_back(std::move(e));
}

std::vector<Section> split_sections(const std::string& text) {
    std::vector<Section> sections;
    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        size_t end = eol == std::string::npos ? text.size() : eol;
        std::string_view raw(text.data() + pos, end - pos);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        ++line_no;
        take_line(raw, line_no, sections);
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    std::set<std::string> seen;
    for (const Section& s : sections)
        if (!seen.insert(s.name).second)
            fail(ParseErrorKind::DuplicateComponent, s.line, 1, s.name,
                 "section [" + s.name + "] appears twice");
    return sections;
}

long read_long(const std::string& tok, int line, int col) {
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE)
        fail(ParseErrorKind::Syntax, line, col, tok, "expected an integer");
    return v;
}

double read_real(const std::string& tok, int line, int col) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE)
        fail(ParseErrorKind::Syntax, line, col, tok, "expected a real number");
    return v;
}

// whitespace-separated tokens of a value, with the 1-based column of each
std::vector<std::pair<std::string, int>> value_tokens(const Entry& e) {
    std::vector<std::pair<std::string, int>> out;
    size_t i = 0;
    while (i < e.value.size()) {
        while (i < e.value.size() && std::isspace(static_cast<unsigned char>(e.value[i]))) ++i;
        if (i >= e.value.size()) break;
        size_t j = i;
        while (j < e.value.size() && !std::isspace(static_cast<unsigned char>(e.value[j]))) ++j;
        out.emplace_back(e.value.substr(i, j - i), e.value_col + static_cast<int>(i));
        i = j;
    }
    return out;
}

// Scans a parenthesized integer tuple like "(1,2)". Indices come back
// 1-based and unvalidated; the caller applies range and ordering rules.
struct RawTuple {
    std::vector<long> indices;
    std::vector<int> columns; // of each index
};

RawTuple scan_tuple(const std::string& text, int line, int col_of_first_char) {
    size_t i = 0;
    auto col = [&](size_t at) { return col_of_first_char + static_cast<int>(at); };
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    if (i >= text.size() || text[i] != '(')
        fail(ParseErrorKind::Syntax, line, col(i), text,
             "expected a parenthesized index tuple like (1,2)");
    ++i;
    RawTuple t;
    for (;;) {
        skip();
        size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start)
            fail(ParseErrorKind::Syntax, line, col(start),
                 i < text.size() ? std::string(1, text[i]) : "", "expected an index");
        std::string tok = text.substr(start, i - start);
        t.indices.push_back(read_long(tok, line, col(start)));
        t.columns.push_back(col(start));
        skip();
        if (i < text.size() && text[i] == ',') {
            ++i;
            continue;
        }
        if (i < text.size() && text[i] == ')') {
            ++i;
            break;
        }
        fail(ParseErrorKind::Syntax, line, col(i), i < text.size() ? std::string(1, text[i]) : "",
             "expected ',' or ')' in index tuple");
    }
    skip();
    if (i != text.size())
        fail(ParseErrorKind::Syntax, line, col(i), text.substr(i), "unexpected text after tuple");
    return t;
}

// component key "(i,j,...)" -> 0-based strictly ascending IndexTuple
IndexTuple read_component_key(const Entry& e, int dim, int grade) {
    RawTuple raw = scan_tuple(e.key, e.line, e.key_col);
    if (static_cast<int>(raw.indices.size()) != grade)
        fail(ParseErrorKind::Syntax, e.line, e.key_col, e.key,
             "this block expects " + std::to_string(grade) + " index" +
                 (grade == 1 ? "" : "es") + " per component");
    IndexTuple idx;
    for (size_t m = 0; m < raw.indices.size(); ++m) {
        long v = raw.indices[m];
        if (v < 1 || v > dim)
            fail(ParseErrorKind::IndexOutOfRange, e.line, raw.columns[m], std::to_string(v),
                 "index " + std::to_string(v) + " outside 1.." + std::to_string(dim));
        idx.push_back(static_cast<int>(v) - 1);
    }
    for (size_t m = 1; m < idx.size(); ++m)
        if (idx[m] <= idx[m - 1])
            fail(ParseErrorKind::DuplicateComponent, e.line, e.key_col, e.key,
                 "component indices must be strictly ascending");
    return idx;
}

// ---------------------------------------------------------------------------
// named scalar resolution (acyclic by construction, DFS with a visit mark)

class ScalarTable {
public:
    ScalarTable(const Chart& chart) : chart_(chart) {}

    void add(const Entry& e) {
        if (!is_identifier(e.key))
            fail(ParseErrorKind::Syntax, e.line, e.key_col, e.key,
                 "scalar name must be an identifier");
        if (e.key == "i")
            fail(ParseErrorKind::Syntax, e.line, e.key_col, e.key,
                 "'i' is the imaginary unit and cannot be redefined");
        for (const std::string& c : chart_.coord_names)
            if (c == e.key)
                fail(ParseErrorKind::Syntax, e.line, e.key_col, e.key,
                     "scalar name shadows coordinate '" + c + "'");
        if (!defs_.emplace(e.key, Def{e, 0, ScalarExpr{}}).second)
            fail(ParseErrorKind::DuplicateComponent, e.line, e.key_col, e.key,
                 "scalar '" + e.key + "' defined twice");
        order_.push_back(e.key);
    }

    void resolve_all() {
        for (const std::string& name : order_) resolve(name);
    }

    // resolver for expressions in later blocks (everything resolved by then)
    NameResolver resolver() {
        return [this](std::string_view name, ScalarExpr& out) {
            auto it = defs_.find(std::string(name));
            if (it == defs_.end()) return false;
            out = resolve(it->first);
            return true;
        };
    }

private:
    struct Def {
        Entry entry;
        int state = 0; // 0 fresh, 1 in progress, 2 done
        ScalarExpr expr;
    };

    ScalarExpr resolve(const std::string& name) {
        Def& d = defs_.at(name);
        if (d.state == 2) return d.expr;
        if (d.state == 1)
            fail(ParseErrorKind::CyclicScalarDefinition, d.entry.line, d.entry.key_col, name,
                 "scalar '" + name + "' participates in a definition cycle");
        d.state = 1;
        d.expr = parse_expression(d.entry.value, chart_, resolver(), d.entry.line,
                                  d.entry.value_col - 1);
        d.state = 2;
        return d.expr;
    }

    const Chart& chart_;
    std::map<std::string, Def> defs_;
    std::vector<std::string> order_;
};

// ---------------------------------------------------------------------------
// block readers

ChartPtr read_chart(const Section& sec) {
    const Entry* dim_e = nullptr;
    const Entry* coords_e = nullptr;
    const Entry* box_e = nullptr;
    const Entry* pairs_e = nullptr;
    const Entry* guard_e = nullptr;
    for (const Entry& e : sec.entries) {
        const Entry** slot = nullptr;
        if (e.key == "dim") slot = &dim_e;
        else if (e.key == "coords") slot = &coords_e;
        else if (e.key == "box") slot = &box_e;
        else if (e.key == "pairs") slot = &pairs_e;
        else if (e.key == "guard_eps") slot = &guard_e;
        else
            fail(ParseErrorKind::Syntax, e.line, e.key_col, e.key,
                 "unknown [chart] key (expected dim, coords, box, pairs, guard_eps)");
        if (*slot)
            fail(ParseErrorKind::DuplicateComponent, e.line, e.key_col, e.key,
                 "[chart] key '" + e.key + "' given twice");
        *slot = &e;
    }
    if (!dim_e)
        fail(ParseErrorKind::Syntax, sec.line, 1, "chart", "[chart] needs a 'dim' entry");
    long dim = read_long(dim_e->value, dim_e->line, dim_e->value_col);
    if (dim < 1 || dim > 64)
        fail(ParseErrorKind::Syntax, dim_e->line, dim_e->value_col, dim_e->value,
             "dim must be between 1 and 64");

    std::vector<std::string> names;
    if (coords_e) {
        for (auto& [tok, col] : value_tokens(*coords_e)) {
            if (!is_identifier(tok))
                fail(ParseErrorKind::Syntax, coords_e->line, col, tok,
                     "coordinate name must be an identifier");
            names.push_back(tok);
        }
        if (static_cast<long>(names.size()) != dim)
            fail(ParseErrorKind::Syntax, coords_e->line, coords_e->value_col, coords_e->value,
                 "coords lists " + std::to_string(names.size()) + " names for dim = " +
                     std::to_string(dim));
    }

    std::vector<std::array<double, 2>> box;
    if (box_e) {
        std::vector<double> vals;
        for (auto& [tok, col] : value_tokens(*box_e)) vals.push_back(read_real(tok, box_e->line, col));
        if (vals.size() != 2 && vals.size() != 2 * static_cast<size_t>(dim))
            fail(ParseErrorKind::Syntax, box_e->line, box_e->value_col, box_e->value,
                 "box needs 2 numbers (all axes) or 2*dim numbers (per axis)");
        if (vals.size() == 2) {
            std::vector<double> rep;
            for (long k = 0; k < dim; ++k) {
                rep.push_back(vals[0]);
                rep.push_back(vals[1]);
            }
            vals = std::move(rep);
        }
        for (size_t k = 0; k + 1 < vals.size(); k += 2) box.push_back({vals[k], vals[k + 1]});
    }

    std::vector<std::array<int, 2>> pairs;
    if (pairs_e) {
        // value like "(1,2) (3,4)": split on whitespace between tuples
        const std::string& v = pairs_e->value;
        size_t i = 0;
        while (i < v.size()) {
            while (i < v.size() && std::isspace(static_cast<unsigned char>(v[i]))) ++i;
            if (i >= v.size()) break;
            size_t j = v.find(')', i);
            if (j == std::string::npos)
                fail(ParseErrorKind::Syntax, pairs_e->line, pairs_e->value_col + static_cast<int>(i),
                     v.substr(i), "expected pairs like (1,2) (3,4)");
            RawTuple t = scan_tuple(v.substr(i, j - i + 1), pairs_e->line,
                                    pairs_e->value_col + static_cast<int>(i));
            if (t.indices.size() != 2)
                fail(ParseErrorKind::Syntax, pairs_e->line,
                     pairs_e->value_col + static_cast<int>(i), v.substr(i, j - i + 1),
                     "a complex pair has exactly two indices");
            for (size_t m = 0; m < 2; ++m)
                if (t.indices[m] < 1 || t.indices[m] > dim)
                    fail(ParseErrorKind::IndexOutOfRange, pairs_e->line, t.columns[m],
                         std::to_string(t.indices[m]),
                         "index " + std::to_string(t.indices[m]) + " outside 1.." +
                             std::to_string(dim));
            pairs.push_back({static_cast<int>(t.indices[0]) - 1,
                             static_cast<int>(t.indices[1]) - 1});
            i = j + 1;
        }
    }

    double guard = 1e-12;
    if (guard_e) {
        guard = read_real(guard_e->value, guard_e->line, guard_e->value_col);
        if (!(guard > 0.0))
            fail(ParseErrorKind::Syntax, guard_e->line, guard_e->value_col, guard_e->value,
                 "guard_eps must be positive");
    }

    try {
        return make_chart(static_cast<int>(dim), std::move(names), std::move(box),
                          std::move(pairs), guard);
    } catch (const Error& err) {
        fail(ParseErrorKind::Syntax, sec.line, 1, "chart", err.what());
    }
}

GradedField read_field_block(const Section& sec, ChartPtr chart, Variance var, int grade,
                             const NameResolver& names) {
    GradedField f = var == Variance::Covariant ? GradedField::form(chart, grade)
                                               : GradedField::multivector(chart, grade);
    std::set<IndexTuple> seen;
    for (const Entry& e : sec.entries) {
        IndexTuple t = read_component_key(e, chart->dim, grade);
        if (!seen.insert(t).second)
            fail(ParseErrorKind::DuplicateComponent, e.line, e.key_col, e.key,
                 "component " + e.key + " already set in [" + sec.name + "]");
        f.set(t, parse_expression(e.value, *chart, names, e.line, e.value_col - 1));
    }
    return f;
}

std::vector<FormField> read_polarization(const Section& sec, ChartPtr chart,
                                         const NameResolver& names) {
    std::map<int, FormField> gens;
    std::set<std::pair<int, int>> seen;
    for (const Entry& e : sec.entries) {
        RawTuple raw = scan_tuple(e.key, e.line, e.key_col);
        if (raw.indices.size() != 2)
            fail(ParseErrorKind::Syntax, e.line, e.key_col, e.key,
                 "polarization keys are (generator, coordinate) pairs");
        long g = raw.indices[0], ci = raw.indices[1];
        if (g < 1 || g > chart->dim)
            fail(ParseErrorKind::IndexOutOfRange, e.line, raw.columns[0], std::to_string(g),
                 "generator index " + std::to_string(g) + " outside 1.." +
                     std::to_string(chart->dim));
        if (ci < 1 || ci > chart->dim)
            fail(ParseErrorKind::IndexOutOfRange, e.line, raw.columns[1], std::to_string(ci),
                 "index " + std::to_string(ci) + " outside 1.." + std::to_string(chart->dim));
        if (!seen.insert({static_cast<int>(g), static_cast<int>(ci)}).second)
            fail(ParseErrorKind::DuplicateComponent, e.line, e.key_col, e.key,
                 "component " + e.key + " already set in [polarization]");
        auto it = gens.try_emplace(static_cast<int>(g), GradedField::form(chart, 1)).first;
        it->second.set({static_cast<int>(ci) - 1},
                       parse_expression(e.value, *chart, names, e.line, e.value_col - 1));
    }
    std::vector<FormField> out;
    if (gens.empty()) return out;
    int top = gens.rbegin()->first;
    for (int g = 1; g <= top; ++g) {
        auto it = gens.find(g);
        if (it == gens.end())
            fail(ParseErrorKind::Syntax, sec.line, 1, "polarization",
                 "generator " + std::to_string(g) + " has no components");
        out.push_back(std::move(it->second));
    }
    return out;
}

std::vector<std::pair<std::string, ScalarExpr>> read_named_block(const Section& sec,
                                                                 const Chart& chart,
                                                                 const NameResolver& names) {
    std::vector<std::pair<std::string, ScalarExpr>> out;
    std::set<std::string> seen;
    for (const Entry& e : sec.entries) {
        if (!is_identifier(e.key))
            fail(ParseErrorKind::Syntax, e.line, e.key_col, e.key,
                 "entry name must be an identifier");
        if (!seen.insert(e.key).second)
            fail(ParseErrorKind::DuplicateComponent, e.line, e.key_col, e.key,
                 "name '" + e.key + "' already used in [" + sec.name + "]");
        out.emplace_back(e.key,
                         parse_expression(e.value, chart, names, e.line, e.value_col - 1));
    }
    return out;
}

QuadratureBlock read_quadrature(const Section& sec, const Chart& chart,
                                const NameResolver& names) {
    QuadratureBlock q;
    std::set<std::string> seen;
    for (const Entry& e : sec.entries) {
        if (!seen.insert(e.key).second)
            fail(ParseErrorKind::DuplicateComponent, e.line, e.key_col, e.key,
                 "[quadrature] key '" + e.key + "' given twice");
        if (e.key == "points") {
            long p = read_long(e.value, e.line, e.value_col);
            if (p < 1 || p > 4096)
                fail(ParseErrorKind::Syntax, e.line, e.value_col, e.value,
                     "points must be between 1 and 4096");
            q.points_per_axis = static_cast<int>(p);
        } else if (e.key == "h" || e.key == "u1" || e.key == "u2") {
            ScalarExpr x = parse_expression(e.value, chart, names, e.line, e.value_col - 1);
            if (e.key == "h") q.h = x;
            else if (e.key == "u1") q.u1 = x;
            else q.u2 = x;
        } else {
            fail(ParseErrorKind::Syntax, e.line, e.key_col, e.key,
                 "unknown [quadrature] key (expected points, h, u1, u2)");
        }
    }
    return q;
}

} // namespace

Manifest parse_manifest(const std::string& text) {
    std::vector<Section> sections = split_sections(text);

    const Section* chart_sec = nullptr;
    for (const Section& s : sections)
        if (s.name == "chart") chart_sec = &s;
    if (!chart_sec)
        fail(ParseErrorKind::Syntax, 1, 1, "chart", "manifest needs a [chart] section");

    Manifest m;
    m.chart = read_chart(*chart_sec);

    ScalarTable scalars(*m.chart);
    for (const Section& s : sections)
        if (s.name == "scalars")
            for (const Entry& e : s.entries) scalars.add(e);
    scalars.resolve_all();
    NameResolver names = scalars.resolver();

    for (const Section& s : sections) {
        if (s.name == "chart" || s.name == "scalars") continue;
        if (s.name == "Lambda")
            m.Lambda = read_field_block(s, m.chart, Variance::Contravariant, 2, names);
        else if (s.name == "phi")
            m.phi = read_field_block(s, m.chart, Variance::Covariant, 3, names);
        else if (s.name == "theta")
            m.theta = read_field_block(s, m.chart, Variance::Covariant, 1, names);
        else if (s.name == "Z")
            m.Z = read_field_block(s, m.chart, Variance::Contravariant, 1, names);
        else if (s.name == "eta")
            m.eta = read_field_block(s, m.chart, Variance::Covariant, 2, names);
        else if (s.name == "vartheta")
            m.vartheta = read_field_block(s, m.chart, Variance::Covariant, 1, names);
        else if (s.name == "omega")
            m.omega = read_field_block(s, m.chart, Variance::Covariant, 1, names);
        else if (s.name == "polarization")
            m.polarization = read_polarization(s, m.chart, names);
        else if (s.name == "sections")
            m.sections = read_named_block(s, *m.chart, names);
        else if (s.name == "observables")
            m.observables = read_named_block(s, *m.chart, names);
        else if (s.name == "quadrature")
            m.quadrature = read_quadrature(s, *m.chart, names);
        else
            fail(ParseErrorKind::Syntax, s.line, 1, s.name, "unknown section [" + s.name + "]");
    }
    return m;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read manifest file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

namespace {

void emit_components(std::ostringstream& out, const char* name, const GradedField& f,
                     const Chart& chart) {
    out << "\n[" << name << "]\n";
    for (const auto& [tuple, value] : f.components()) {
        out << "(";
        for (size_t i = 0; i < tuple.size(); ++i) out << (i ? "," : "") << tuple[i] + 1;
        out << ") = " << to_string(value, chart) << "\n";
    }
}

} // namespace

std::string serialize_manifest(const Manifest& m) {
    std::ostringstream out;
    const Chart& c = *m.chart;
    out << "[chart]\n";
    out << "dim = " << c.dim << "\n";
    out << "coords =";
    for (const std::string& n : c.coord_names) out << " " << n;
    out << "\n";
    out << "box =";
    for (const auto& [lo, hi] : c.box) out << " " << format_real(lo) << " " << format_real(hi);
    out << "\n";
    if (!c.complex_pairs.empty()) {
        out << "pairs =";
        for (const auto& [a, b] : c.complex_pairs) out << " (" << a + 1 << "," << b + 1 << ")";
        out << "\n";
    }
    out << "guard_eps = " << format_real(c.guard_eps) << "\n";

    if (m.Lambda) emit_components(out, "Lambda", *m.Lambda, c);
    if (m.phi) emit_components(out, "phi", *m.phi, c);
    if (m.theta) emit_components(out, "theta", *m.theta, c);
    if (m.Z) emit_components(out, "Z", *m.Z, c);
    if (m.eta) emit_components(out, "eta", *m.eta, c);
    if (m.vartheta) emit_components(out, "vartheta", *m.vartheta, c);
    if (m.omega) emit_components(out, "omega", *m.omega, c);

    if (!m.polarization.empty()) {
        out << "\n[polarization]\n";
        for (size_t g = 0; g < m.polarization.size(); ++g)
            for (const auto& [tuple, value] : m.polarization[g].components())
                out << "(" << g + 1 << "," << tuple[0] + 1 << ") = " << to_string(value, c)
                    << "\n";
    }
    if (!m.sections.empty()) {
        out << "\n[sections]\n";
        for (const auto& [name, expr] : m.sections)
            out << name << " = " << to_string(expr, c) << "\n";
    }
    if (!m.observables.empty()) {
        out << "\n[observables]\n";
        for (const auto& [name, expr] : m.observables)
            out << name << " = " << to_string(expr, c) << "\n";
    }
    if (m.quadrature) {
        out << "\n[quadrature]\n";
        out << "points = " << m.quadrature->points_per_axis << "\n";
        if (m.quadrature->h) out << "h = " << to_string(*m.quadrature->h, c) << "\n";
        if (m.quadrature->u1) out << "u1 = " << to_string(*m.quadrature->u1, c) << "\n";
        if (m.quadrature->u2) out << "u2 = " << to_string(*m.quadrature->u2, c) << "\n";
    }
    return out.str();
}

namespace {

template <typename T, typename Eq>
bool opt_eq(const std::optional<T>& a, const std::optional<T>& b, Eq eq) {
    if (a.has_value() != b.has_value()) return false;
    return !a || eq(*a, *b);
}

} // namespace

bool struct_eq(const Manifest& a, const Manifest& b) {
    if (!same_chart(*a.chart, *b.chart)) return false;
    auto field_eq = [](const GradedField& x, const GradedField& y) { return struct_eq(x, y); };
    auto expr_eq = [](const ScalarExpr& x, const ScalarExpr& y) { return struct_eq(x, y); };
    if (!opt_eq(a.Lambda, b.Lambda, field_eq) || !opt_eq(a.phi, b.phi, field_eq) ||
        !opt_eq(a.theta, b.theta, field_eq) || !opt_eq(a.Z, b.Z, field_eq) ||
        !opt_eq(a.eta, b.eta, field_eq) || !opt_eq(a.vartheta, b.vartheta, field_eq) ||
        !opt_eq(a.omega, b.omega, field_eq))
        return false;
    if (a.polarization.size() != b.polarization.size()) return false;
    for (size_t g = 0; g < a.polarization.size(); ++g)
        if (!struct_eq(a.polarization[g], b.polarization[g])) return false;
    auto named_eq = [&](const auto& xs, const auto& ys) {
        if (xs.size() != ys.size()) return false;
        for (size_t k = 0; k < xs.size(); ++k)
            if (xs[k].first != ys[k].first || !struct_eq(xs[k].second, ys[k].second))
                return false;
        return true;
    };
    if (!named_eq(a.sections, b.sections) || !named_eq(a.observables, b.observables))
        return false;
    if (a.quadrature.has_value() != b.quadrature.has_value()) return false;
    if (a.quadrature) {
        if (a.quadrature->points_per_axis != b.quadrature->points_per_axis) return false;
        if (!opt_eq(a.quadrature->h, b.quadrature->h, expr_eq) ||
            !opt_eq(a.quadrature->u1, b.quadrature->u1, expr_eq) ||
            !opt_eq(a.quadrature->u2, b.quadrature->u2, expr_eq))
            return false;
    }
    return true;
}

} // namespace atwist
