#pragma once

#include "gff/structure.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gff {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", col " + std::to_string(c) + ": " + msg),
          line(l),
          column(c) {}
};

// Parses one expression of the manifold DSL over the given coordinates.
// Grammar: expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
// factor := base ('^' nonneg-int)?; base := rational | ident | '(' expr ')' |
// '-' base; rational := int ('/' positive-int)?. No floats.
ScalarField parse_expression(const std::string& text, const Coords& coords);
// Same, with an explicit source position for file-level diagnostics.
ScalarField parse_expression_at(const std::string& text, const Coords& coords, int line, int col);

using SamplePoint = std::map<std::string, Rational>;

struct ManifoldSpec {
    std::size_t dim = 0;
    std::size_t r = 0;
    Coords coords;
    TensorField11 phi;
    std::vector<VectorField> xi;
    std::vector<PForm> eta;       // degree 1
    BilinearForm metric;
    std::vector<SamplePoint> sample_points;  // empty means "use defaults"

    GffStructure to_structure() const;
    std::string to_text() const;  // round-trips through parse_manifold_spec
    bool operator==(const ManifoldSpec& o) const;

    // Declared samples, or origin plus the 2*dim one-hot +-1 points.
    std::vector<SamplePoint> effective_sample_points() const;
};

ManifoldSpec parse_manifold_spec(const std::string& text);

// The three built-in example structures: "example1", "example2", "example3".
ManifoldSpec builtin_fixture(const std::string& name);
std::vector<std::string> builtin_fixture_names();

struct Report {
    std::string classification;  // class_to_string value
    std::optional<Rational> space_form_c;
    Verdicts verdicts;
};

std::string serialize_report(const Report& r, const std::string& format);  // "text" | "json"

}  // namespace gff
