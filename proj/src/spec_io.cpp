#include "gff/spec_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

namespace gff {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

struct Entry {
    ScalarField value;
    int line;
};

}  // namespace

GffStructure ManifoldSpec::to_structure() const {
    GffStructure s;
    s.coords = coords;
    s.r = r;
    s.phi = phi;
    s.xi = xi;
    s.eta = eta;
    s.g = metric;
    return s;
}

std::vector<SamplePoint> ManifoldSpec::effective_sample_points() const {
    if (!sample_points.empty()) return sample_points;
    std::vector<SamplePoint> pts;
    SamplePoint origin;
    for (const auto& c : coords) origin[c] = 0;
    pts.push_back(origin);
    for (const auto& c : coords)
        for (int sgn : {+1, -1}) {
            SamplePoint p = origin;
            p[c] = sgn;
            pts.push_back(p);
        }
    return pts;
}

bool ManifoldSpec::operator==(const ManifoldSpec& o) const {
    return dim == o.dim && r == o.r && coords == o.coords && phi == o.phi && xi == o.xi &&
           eta == o.eta && metric == o.metric && sample_points == o.sample_points;
}

std::string ManifoldSpec::to_text() const {
    std::ostringstream out;
    out << "dim " << dim << "\n";
    out << "frame " << r << "\n";
    out << "coords";
    for (const auto& c : coords) out << " " << c;
    out << "\n";
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            if (!phi.comp[i][j].is_zero())
                out << "phi[" << i + 1 << "][" << j + 1 << "] = " << phi.comp[i][j].to_string()
                    << "\n";
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t i = 0; i < dim; ++i)
            if (!xi[a].comp[i].is_zero())
                out << "xi[" << a + 1 << "][" << i + 1 << "] = " << xi[a].comp[i].to_string()
                    << "\n";
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t i = 0; i < dim; ++i) {
            ScalarField v = eta[a].at({i});
            if (!v.is_zero())
                out << "eta[" << a + 1 << "][" << i + 1 << "] = " << v.to_string() << "\n";
        }
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j)
            if (!metric.comp[i][j].is_zero())
                out << "g[" << i + 1 << "][" << j + 1 << "] = " << metric.comp[i][j].to_string()
                    << "\n";
    for (const auto& p : sample_points) {
        out << "sample";
        for (const auto& c : coords) {
            auto it = p.find(c);
            Rational v = it == p.end() ? Rational(0) : it->second;
            out << " " << c << "=" << rat_to_string(v);
        }
        out << "\n";
    }
    return out.str();
}

ManifoldSpec parse_manifold_spec(const std::string& text) {
    ManifoldSpec spec;
    bool have_dim = false, have_frame = false, have_coords = false;

    // Raw entries, checked and assembled after the scan.
    std::map<std::pair<std::size_t, std::size_t>, Entry> phi_e, g_e, xi_e, eta_e;

    static const std::regex head_re(R"(^(phi|g|xi|eta)\[([0-9]+)\]\[([0-9]+)\]$)");

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        auto toks = split_ws(s);

        if (toks[0] == "dim" || toks[0] == "frame") {
            if (toks.size() != 2)
                throw ParseError(line, 1, "expected '" + toks[0] + " <positive integer>'");
            std::size_t v = 0;
            try {
                std::size_t used = 0;
                v = std::stoul(toks[1], &used);
                if (used != toks[1].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ParseError(line, 1, "expected '" + toks[0] + " <positive integer>'");
            }
            if (v == 0) throw ParseError(line, 1, toks[0] + " must be positive");
            if (toks[0] == "dim") {
                if (have_dim) throw ParseError(line, 1, "duplicate 'dim'");
                spec.dim = v;
                have_dim = true;
            } else {
                if (have_frame) throw ParseError(line, 1, "duplicate 'frame'");
                spec.r = v;
                have_frame = true;
            }
            continue;
        }

        if (toks[0] == "coords") {
            if (have_coords) throw ParseError(line, 1, "duplicate 'coords'");
            if (!have_dim) throw ParseError(line, 1, "'coords' requires a prior 'dim'");
            std::set<std::string> seen;
            for (std::size_t k = 1; k < toks.size(); ++k) {
                if (!is_identifier(toks[k]))
                    throw ParseError(line, 1, "invalid coordinate name '" + toks[k] + "'");
                if (!seen.insert(toks[k]).second)
                    throw ParseError(line, 1, "repeated coordinate name '" + toks[k] + "'");
                spec.coords.push_back(toks[k]);
            }
            if (spec.coords.size() != spec.dim)
                throw ParseError(line, 1,
                                 "coords lists " + std::to_string(spec.coords.size()) +
                                     " names but dim is " + std::to_string(spec.dim));
            have_coords = true;
            continue;
        }

        if (toks[0] == "sample") {
            if (!have_coords) throw ParseError(line, 1, "'sample' requires a prior 'coords'");
            SamplePoint p;
            for (const auto& c : spec.coords) p[c] = 0;
            for (std::size_t k = 1; k < toks.size(); ++k) {
                std::size_t eq = toks[k].find('=');
                if (eq == std::string::npos)
                    throw ParseError(line, 1, "expected 'coord=rational' in sample");
                std::string name = toks[k].substr(0, eq);
                if (std::find(spec.coords.begin(), spec.coords.end(), name) == spec.coords.end())
                    throw ParseError(line, 1, "unknown coordinate '" + name + "' in sample");
                auto v = rat_parse(toks[k].substr(eq + 1));
                if (!v)
                    throw ParseError(line, 1, "malformed rational for '" + name + "' in sample");
                p[name] = *v;
            }
            spec.sample_points.push_back(p);
            continue;
        }

        // Assignment line: head = expr.
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError(line, 1, "unrecognized directive '" + toks[0] + "'");
        if (!have_dim || !have_frame || !have_coords)
            throw ParseError(line, 1, "entries require prior 'dim', 'frame' and 'coords'");
        std::string head = trim(s.substr(0, eq));
        std::smatch m;
        if (!std::regex_match(head, m, head_re))
            throw ParseError(line, 1, "unrecognized entry '" + head + "'");
        std::string kind = m[1];
        std::size_t i = std::stoul(m[2]);
        std::size_t j = std::stoul(m[3]);
        std::size_t bound1 = (kind == "xi" || kind == "eta") ? spec.r : spec.dim;
        if (i < 1 || i > bound1 || j < 1 || j > spec.dim)
            throw ParseError(line, 1, "index out of range in '" + head + "'");

        // Column of the expression within the raw line (1-based).
        std::size_t lead = raw.find_first_not_of(" \t");
        std::size_t eq_raw = raw.find('=', lead);
        int expr_col = static_cast<int>(eq_raw) + 2;
        ScalarField value =
            parse_expression_at(raw.substr(eq_raw + 1), spec.coords, line, expr_col);

        auto key = std::make_pair(i - 1, j - 1);
        auto& table = kind == "phi" ? phi_e : kind == "g" ? g_e : kind == "xi" ? xi_e : eta_e;
        if (kind != "g" && table.count(key))
            throw ParseError(line, 1, "duplicate entry '" + head + "'");
        if (kind == "g" && g_e.count(key)) throw ParseError(line, 1, "duplicate entry '" + head + "'");
        table.emplace(key, Entry{value, line});
    }

    if (!have_dim) throw ParseError(line + 1, 1, "missing 'dim'");
    if (!have_frame) throw ParseError(line + 1, 1, "missing 'frame'");
    if (!have_coords) throw ParseError(line + 1, 1, "missing 'coords'");
    if (spec.r >= spec.dim)
        throw ParseError(line + 1, 1, "frame count must be smaller than dim");
    if ((spec.dim - spec.r) % 2 != 0 || spec.dim == spec.r)
        throw ParseError(line + 1, 1, "dim - frame must be even and positive");

    spec.phi = TensorField11(spec.coords);
    for (const auto& [k, e] : phi_e) spec.phi.comp[k.first][k.second] = e.value;

    spec.xi.assign(spec.r, VectorField(spec.coords));
    for (const auto& [k, e] : xi_e) spec.xi[k.first].comp[k.second] = e.value;

    spec.eta.assign(spec.r, PForm(spec.coords, 1));
    for (const auto& [k, e] : eta_e) spec.eta[k.first].set({k.second}, e.value);

    spec.metric = BilinearForm(spec.coords);
    for (const auto& [k, e] : g_e) {
        auto sym = std::make_pair(k.second, k.first);
        if (k.first != k.second && g_e.count(sym)) {
            if (k.first < k.second && !(e.value == g_e.at(sym).value))
                throw ParseError(g_e.at(sym).line, 1,
                                 "metric not symmetric: g[" + std::to_string(k.first + 1) + "][" +
                                     std::to_string(k.second + 1) + "] disagrees with its mirror");
        }
        spec.metric.comp[k.first][k.second] = e.value;
        spec.metric.comp[k.second][k.first] = e.value;
    }

    return spec;
}

std::vector<std::string> builtin_fixture_names() { return {"example1", "example2", "example3"}; }

ManifoldSpec builtin_fixture(const std::string& name) {
    // R^6, xi_a = d/dz^a, eta^a = dz^a - y1 dx1 - y2 dx2,
    // g = -sum eta (x) eta + (1/2) sum (dx^2 + dy^2); both xi timelike.
    static const char* example1 = R"(dim 6
frame 2
coords x1 x2 y1 y2 z1 z2
phi[1][3] = 1
phi[2][4] = 1
phi[3][1] = -1
phi[4][2] = -1
phi[5][3] = y1
phi[5][4] = y2
phi[6][3] = y1
phi[6][4] = y2
xi[1][5] = 1
xi[2][6] = 1
eta[1][1] = -y1
eta[1][2] = -y2
eta[1][5] = 1
eta[2][1] = -y1
eta[2][2] = -y2
eta[2][6] = 1
g[1][1] = 1/2 - 2*y1^2
g[1][2] = -2*y1*y2
g[1][5] = y1
g[1][6] = y1
g[2][2] = 1/2 - 2*y2^2
g[2][5] = y2
g[2][6] = y2
g[3][3] = 1/2
g[4][4] = 1/2
g[5][5] = -1
g[6][6] = -1
)";

    // R^6, eta^a = dz^a + y1 dx1 - y2 dx2,
    // g = +sum eta (x) eta + (1/2)(-(dx1^2+dy1^2) + dx2^2 + dy2^2); both xi spacelike.
    static const char* example2 = R"(dim 6
frame 2
coords x1 x2 y1 y2 z1 z2
phi[1][3] = 1
phi[2][4] = 1
phi[3][1] = -1
phi[4][2] = -1
phi[5][3] = -y1
phi[5][4] = y2
phi[6][3] = -y1
phi[6][4] = y2
xi[1][5] = 1
xi[2][6] = 1
eta[1][1] = y1
eta[1][2] = -y2
eta[1][5] = 1
eta[2][1] = y1
eta[2][2] = -y2
eta[2][6] = 1
g[1][1] = 2*y1^2 - 1/2
g[1][2] = -2*y1*y2
g[1][5] = y1
g[1][6] = y1
g[2][2] = 2*y2^2 + 1/2
g[2][5] = -y2
g[2][6] = -y2
g[3][3] = -1/2
g[4][4] = 1/2
g[5][5] = 1
g[6][6] = 1
)";

    // R^4 Lorentzian, eta^a = dz^a + y dx; xi_1 spacelike, xi_2 timelike.
    static const char* example3 = R"(dim 4
frame 2
coords x y z1 z2
phi[1][2] = -1
phi[2][1] = 1
phi[3][2] = y
phi[4][2] = y
xi[1][3] = 1
xi[2][4] = 1
eta[1][1] = y
eta[1][3] = 1
eta[2][1] = y
eta[2][4] = 1
g[1][1] = 1/2
g[1][3] = y
g[1][4] = -y
g[2][2] = 1/2
g[3][3] = 1
g[4][4] = -1
)";

    if (name == "example1") return parse_manifold_spec(example1);
    if (name == "example2") return parse_manifold_spec(example2);
    if (name == "example3") return parse_manifold_spec(example3);
    throw std::invalid_argument("unknown fixture '" + name + "'");
}

std::string serialize_report(const Report& r, const std::string& format) {
    if (format == "json") {
        nlohmann::ordered_json doc;
        doc["classification"] = r.classification;
        if (r.space_form_c)
            doc["space_form_c"] = rat_to_string(*r.space_form_c);
        else
            doc["space_form_c"] = nullptr;
        doc["verdicts"] = nlohmann::ordered_json::array();
        for (const auto& v : r.verdicts) {
            nlohmann::ordered_json jv;
            jv["name"] = v.name;
            if (v.state == VerdictState::Skipped)
                jv["holds"] = nullptr;
            else
                jv["holds"] = v.holds();
            jv["witness"] = v.witness;
            doc["verdicts"].push_back(jv);
        }
        return doc.dump(2) + "\n";
    }
    if (format != "text") throw std::invalid_argument("unknown report format '" + format + "'");
    std::ostringstream out;
    out << "classification: " << r.classification << "\n";
    if (r.space_form_c) out << "space_form_c: " << rat_to_string(*r.space_form_c) << "\n";
    for (const auto& v : r.verdicts) {
        const char* tag = v.state == VerdictState::Holds    ? "PASS"
                          : v.state == VerdictState::Fails ? "FAIL"
                                                           : "SKIP";
        out << "[" << tag << "] " << v.name;
        if (!v.witness.empty()) out << " (" << v.witness << ")";
        out << "\n";
    }
    return out.str();
}

}  // namespace gff
