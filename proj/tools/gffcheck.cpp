#include "gff/connection.hpp"
#include "gff/spec_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace gff;

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerdictError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- vector expressions on the command line -------------------------------
// Atoms: d<coord> for coordinate frame fields, Z1..Zr for the characteristic
// fields; coefficients are scalar expressions over the coordinates.

struct VecValue {
    bool is_vector = false;
    ScalarField s;
    VectorField v;
};

class VectorExprParser {
public:
    VectorExprParser(const std::string& text, const GffStructure& s)
        : text_(text), s_(s) {}

    VectorField parse() {
        skip_ws();
        VecValue val = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        if (!val.is_vector) fail("expression is a scalar, not a vector");
        return val.v;
    }

private:
    const std::string& text_;
    const GffStructure& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("plane expression, col " + std::to_string(pos_ + 1) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    VecValue scalar(ScalarField f) {
        VecValue v;
        v.s = std::move(f);
        return v;
    }

    VecValue vector(VectorField f) {
        VecValue v;
        v.is_vector = true;
        v.v = std::move(f);
        return v;
    }

    VecValue add(const VecValue& a, const VecValue& b, int sign) {
        if (a.is_vector != b.is_vector) fail("cannot add a scalar and a vector");
        ScalarField sgn = ScalarField::constant(s_.coords, sign);
        if (a.is_vector) return vector(sign > 0 ? a.v + b.v : a.v - b.v);
        return scalar(sign > 0 ? a.s + b.s : a.s - b.s);
    }

    VecValue mul(const VecValue& a, const VecValue& b) {
        if (a.is_vector && b.is_vector) fail("cannot multiply two vectors");
        if (a.is_vector) return vector(a.v * b.s);
        if (b.is_vector) return vector(b.v * a.s);
        return scalar(a.s * b.s);
    }

    VecValue expr() {
        VecValue v = term();
        while (true) {
            if (accept('+'))
                v = add(v, term(), +1);
            else if (accept('-'))
                v = add(v, term(), -1);
            else
                return v;
        }
    }

    VecValue term() {
        VecValue v = factor();
        while (accept('*')) v = mul(v, factor());
        return v;
    }

    VecValue factor() {
        VecValue v = base();
        if (accept('^')) {
            skip_ws();
            if (v.is_vector) fail("cannot exponentiate a vector");
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("expected non-negative integer exponent");
            unsigned e = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                e = e * 10 + static_cast<unsigned>(text_[pos_++] - '0');
            v.s = v.s.pow(e);
        }
        return v;
    }

    VecValue base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '-') {
            ++pos_;
            VecValue v = base();
            ScalarField m1 = ScalarField::constant(s_.coords, -1);
            return v.is_vector ? vector(-v.v) : scalar(v.s * m1);
        }
        if (c == '(') {
            ++pos_;
            VecValue v = expr();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/'))
                ++pos_;
            auto q = rat_parse(text_.substr(start, pos_ - start));
            if (!q) fail("malformed rational literal");
            return scalar(ScalarField::constant(s_.coords, *q));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    VecValue identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        // Coordinate name: a scalar.
        for (const auto& v : s_.coords)
            if (v == name) return scalar(ScalarField::variable(s_.coords, name));
        // d<coord>: coordinate frame field.
        if (name.size() > 1 && name[0] == 'd') {
            std::string tail = name.substr(1);
            for (std::size_t i = 0; i < s_.coords.size(); ++i)
                if (s_.coords[i] == tail) return vector(coordinate_frame(s_.coords, i));
        }
        // Z<k>: characteristic field.
        if (name.size() > 1 && name[0] == 'Z') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            if (digits) {
                std::size_t k = std::stoul(name.substr(1));
                if (k < 1 || k > s_.r) fail("characteristic index out of range in '" + name + "'");
                return vector(s_.xi[k - 1]);
            }
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }
};

// ---- option handling -------------------------------------------------------

struct Options {
    std::string path;
    std::string fixture;
    std::string format = "text";
    std::string point;
    std::string plane;
};

ManifoldSpec load_spec(const Options& opt) {
    if (!opt.fixture.empty() && !opt.path.empty())
        throw InputError("give either a fixture name or a file path, not both");
    if (opt.fixture.empty() && opt.path.empty())
        throw InputError("no input: give a file path or --fixture");
    try {
        if (!opt.fixture.empty()) return builtin_fixture(opt.fixture);
        std::ifstream in(opt.path);
        if (!in) throw InputError("cannot open '" + opt.path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_manifold_spec(buf.str());
    } catch (const ParseError& e) {
        throw InputError(opt.path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

SamplePointMap parse_point(const std::string& text, const Coords& coords) {
    SamplePointMap p;
    for (const auto& c : coords) p[c] = 0;
    if (text.empty() || text == "0") return p;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw InputError("--point expects coord=value pairs");
        std::string name = item.substr(0, eq);
        if (!p.count(name)) throw InputError("--point: unknown coordinate '" + name + "'");
        auto q = rat_parse(item.substr(eq + 1));
        if (!q) throw InputError("--point: malformed rational for '" + name + "'");
        p[name] = *q;
    }
    return p;
}

std::pair<VectorField, VectorField> parse_plane(const std::string& text, const GffStructure& s) {
    std::optional<VectorField> x, y;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ';')) {
        std::size_t eq = part.find('=');
        if (eq == std::string::npos) throw InputError("--plane expects 'X=...;Y=...'");
        std::string name = part.substr(0, eq);
        name.erase(0, name.find_first_not_of(" \t"));
        name.erase(name.find_last_not_of(" \t") + 1);
        std::string body = part.substr(eq + 1);
        VectorField v = VectorExprParser(body, s).parse();
        if (name == "X")
            x = v;
        else if (name == "Y")
            y = v;
        else
            throw InputError("--plane: unknown vector name '" + name + "'");
    }
    if (!x || !y) throw InputError("--plane needs both X and Y");
    return {*x, *y};
}

std::vector<Rational> at_point(const VectorField& v, const SamplePointMap& p) {
    std::vector<Rational> out(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) out[i] = v.comp[i].evaluate(p);
    return out;
}

// ---- shared pipeline pieces ------------------------------------------------

Verdict sampled_signature(const ManifoldSpec& spec, const GffStructure& s) {
    SquareMatrix gm = s.g.as_matrix();
    auto pts = spec.effective_sample_points();
    std::optional<std::pair<int, int>> sig;
    for (const auto& p : pts) {
        try {
            auto here = signature_at_point(gm, p);
            if (sig && *sig != here)
                return make_verdict("sampled signature", false,
                                    "signature varies across sample points");
            sig = here;
        } catch (const std::domain_error& e) {
            return make_verdict("sampled signature", false, e.what());
        }
    }
    std::ostringstream w;
    w << "(" << sig->first << "," << sig->second << ") at " << pts.size() << " points";
    return make_verdict("sampled signature", true, w.str());
}

struct Pipeline {
    GffStructure s;
    ClassificationReport cls;
    std::optional<Connection> conn;
    std::optional<CurvatureTensor> curv;
    std::optional<Rational> space_form_c;
    std::string classification;
};

Pipeline run_pipeline(const ManifoldSpec& spec, bool want_curvature) {
    Pipeline p;
    p.s = spec.to_structure();
    p.cls = classify(p.s);
    p.classification = class_to_string(p.cls.cls);
    bool is_s = p.cls.cls == StructureClass::S;
    if (want_curvature && p.cls.valid_gff) {
        p.conn = levi_civita(p.s.g);
        p.curv = riemann_tensor(*p.conn, p.s.g);
        if (is_s) {
            p.space_form_c = detect_space_form(p.s, *p.curv);
            if (p.space_form_c) p.classification = class_to_string(StructureClass::SSpaceForm);
        }
    }
    return p;
}

int exit_from_verdicts(const Verdicts& v) {
    for (const auto& item : v)
        if (item.state == VerdictState::Fails) return kExitVerdict;
    return kExitOk;
}

void emit(const Report& rep, const std::string& format) { std::cout << serialize_report(rep, format); }

// ---- commands ---------------------------------------------------------------

int cmd_classify(const Options& opt) {
    ManifoldSpec spec = load_spec(opt);
    Pipeline p = run_pipeline(spec, /*want_curvature=*/true);
    Report rep;
    rep.classification = p.classification;
    rep.space_form_c = p.space_form_c;
    rep.verdicts = p.cls.verdicts;
    SquareMatrix gm = p.s.g.as_matrix();
    ScalarField det = matrix_det(gm);
    bool det_const = det.is_constant() && !det.is_zero();
    rep.verdicts.push_back(make_verdict("det(g) is a nonzero constant", det_const,
                                        det.is_constant() ? det.to_string() : "non-constant"));
    if (det_const) rep.verdicts.push_back(sampled_signature(spec, p.s));
    emit(rep, opt.format);
    return p.cls.valid_gff ? kExitOk : kExitVerdict;
}

int cmd_curvature(const Options& opt) {
    ManifoldSpec spec = load_spec(opt);
    Pipeline p = run_pipeline(spec, true);
    if (!p.cls.valid_gff) {
        std::cerr << "structure fails the metric g.f.f axioms; no curvature computed\n";
        return kExitVerdict;
    }
    std::size_t n = p.s.dim();
    const Coords& coords = p.s.coords;

    nlohmann::ordered_json christoffel = nlohmann::ordered_json::object();
    std::ostringstream text;
    text << "classification: " << p.classification << "\n";
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                if (!p.conn->gamma[k][i][j].is_zero()) {
                    std::string key = "Gamma[" + std::to_string(k + 1) + "][" +
                                      std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
                    std::string val = p.conn->gamma[k][i][j].to_string();
                    christoffel[key] = val;
                    text << key << " = " << val << "\n";
                }

    std::optional<std::string> kvalue;
    if (!opt.plane.empty()) {
        SamplePointMap pt = parse_point(opt.point, coords);
        auto [xf, yf] = parse_plane(opt.plane, p.s);
        PointData d = evaluate_at(p.s, *p.curv, pt);
        try {
            Rational k = sectional_curvature(d, at_point(xf, pt), at_point(yf, pt));
            kvalue = rat_to_string(k);
        } catch (const std::domain_error& e) {
            std::cerr << "degenerate plane: Delta = 0 at the requested point\n";
            return kExitVerdict;
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
        text << "sectional curvature K = " << *kvalue << "\n";
    }
    if (p.space_form_c)
        text << "space_form_c: " << rat_to_string(*p.space_form_c) << "\n";
    else
        text << "space_form_c: none\n";

    if (opt.format == "json") {
        nlohmann::ordered_json doc;
        doc["classification"] = p.classification;
        doc["space_form_c"] =
            p.space_form_c ? nlohmann::ordered_json(rat_to_string(*p.space_form_c))
                           : nlohmann::ordered_json(nullptr);
        doc["christoffel"] = christoffel;
        if (kvalue) doc["sectional_curvature"] = *kvalue;
        doc["verdicts"] = nlohmann::ordered_json::array();
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << text.str();
    }
    return kExitOk;
}

Verdicts reconstruction_verdicts(const GffStructure& s, const CurvatureTensor& rt) {
    Verdicts out;
    SamplePointMap origin;
    for (const auto& c : s.coords) origin[c] = 0;
    PointData d = evaluate_at(s, rt, origin);
    TensorField11 proj = s.projector();
    std::vector<std::vector<Rational>> candidates;
    for (std::size_t i = 0; i < s.dim(); ++i) candidates.push_back(at_point(proj.column(i), origin));
    for (std::size_t a = 0; a < s.r; ++a) candidates.push_back(at_point(s.xi[a], origin));

    std::size_t attempted = 0, matched = 0, inapplicable = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            const auto& x = candidates[i];
            const auto& y = candidates[j];
            try {
                Rational direct = sectional_curvature(d, x, y);
                Reconstruction rec = sectional_from_phi(s, d, x, y);
                ++attempted;
                if (!rec.applicable) {
                    ++inapplicable;
                    continue;
                }
                if (rec.value == direct) ++matched;
            } catch (const std::exception&) {
                continue;  // dependent or degenerate plane: not a test plane
            }
        }
    std::ostringstream w;
    w << matched << " of " << attempted - inapplicable << " applicable planes match ("
      << inapplicable << " inapplicable)";
    bool ok = attempted > 0 && matched == attempted - inapplicable;
    out.push_back(
        make_verdict("reconstruction matches direct sectional curvature", ok, w.str()));
    return out;
}

Verdicts q01_verdicts(const GffStructure& s, const AuxTensors& aux) {
    Verdicts out;
    if (aux.epsilon_bar != 0) {
        out.push_back(make_skipped("Q on kernel pairs reduces to the metric",
                                   "precondition failed: epsilon sum is nonzero"));
        return out;
    }
    TensorField11 proj = s.projector();
    bool ok = true;
    std::string wit;
    for (std::size_t a = 0; a < s.r && ok; ++a)
        for (std::size_t b = 0; b < s.r && ok; ++b)
            for (std::size_t i = 0; i < s.dim() && ok; ++i)
                for (std::size_t j = 0; j < s.dim() && ok; ++j) {
                    VectorField Y = proj.column(i);
                    VectorField W = proj.column(j);
                    ScalarField lhs = aux.q_eval(s.xi[a], Y, s.xi[b], W);
                    ScalarField rhs =
                        ScalarField::constant(s.coords, -s.epsilon[a] * s.epsilon[b]) *
                        s.g.eval(W, s.phi.apply(Y));
                    if (!(lhs == rhs)) {
                        ok = false;
                        wit = "first failure at alpha=" + std::to_string(a + 1) +
                              ", beta=" + std::to_string(b + 1);
                    }
                }
    out.push_back(make_verdict("Q on kernel pairs reduces to the metric", ok, wit));
    return out;
}

int cmd_verify(const Options& opt) {
    ManifoldSpec spec = load_spec(opt);
    Pipeline p = run_pipeline(spec, true);
    Report rep;
    rep.classification = p.classification;
    rep.space_form_c = p.space_form_c;
    rep.verdicts = p.cls.verdicts;

    auto skip_rest = [&](const std::string& reason) {
        for (const char* name :
             {"derivative of phi identities", "curvature identities", "reconstruction"})
            rep.verdicts.push_back(make_skipped(name, reason));
    };

    if (!p.cls.valid_gff) {
        skip_rest("precondition failed: not a metric g.f.f structure");
        emit(rep, opt.format);
        return exit_from_verdicts(rep.verdicts);
    }

    // Connection-level identities. The Koszul form is unconditional; the
    // rest require the almost-S / S hypotheses.
    Verdicts sid = check_s_identities(p.s, *p.conn);
    bool contact = p.cls.contact_type;
    bool is_s = p.cls.cls == StructureClass::S || p.cls.cls == StructureClass::SSpaceForm ||
                (p.space_form_c.has_value());
    for (auto& v : sid) {
        bool needs_contact = v.name != "general derivative of phi (Koszul form)";
        bool needs_normal = v.name == "S-form derivative of phi" ||
                            v.name == "derivative of fundamental 2-form";
        if ((needs_contact && !contact) || (needs_normal && !is_s))
            rep.verdicts.push_back(
                make_skipped(v.name, "precondition failed: structure is not of the required class"));
        else
            rep.verdicts.push_back(v);
    }

    if (is_s) {
        for (auto& v : check_killing(p.s)) rep.verdicts.push_back(v);
        AuxTensors aux = aux_tensors(p.s, *p.curv);
        rep.verdicts.push_back(aux.master);
        for (auto& v : curvature_identity_suite(p.s, *p.curv)) rep.verdicts.push_back(v);
        for (auto& v : q01_verdicts(p.s, aux)) rep.verdicts.push_back(v);
        for (auto& v : reconstruction_verdicts(p.s, *p.curv)) rep.verdicts.push_back(v);
    } else {
        rep.verdicts.push_back(
            make_skipped("curvature identities", "precondition failed: structure is not S"));
        rep.verdicts.push_back(
            make_skipped("reconstruction", "precondition failed: structure is not S"));
    }

    emit(rep, opt.format);
    return exit_from_verdicts(rep.verdicts);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification engine for indefinite metric g.f.f structures"};
    app.require_subcommand(1);

    Options opt;
    std::string command;
    for (const char* name : {"classify", "curvature", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("path", opt.path, "manifold spec file");
        sub->add_option("--fixture", opt.fixture, "built-in fixture name");
        sub->add_option("--format", opt.format, "text or json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--point", opt.point, "rational coordinate assignment k=v,...");
        sub->add_option("--plane", opt.plane, "plane 'X=...;Y=...'");
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (command == "classify") return cmd_classify(opt);
        if (command == "curvature") return cmd_curvature(opt);
        return cmd_verify(opt);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerdict;
    }
}
