#include "binn/problem.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "binn/errors.hpp"

namespace binn {

namespace {

// ---- affine expression parser ----------------------------------------------

struct ExprParser {
    const std::string& s;
    size_t at = 0;

    explicit ExprParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (at < s.size() && std::isspace(static_cast<unsigned char>(s[at]))) ++at;
    }
    bool eat(char c) {
        skip_ws();
        if (at < s.size() && s[at] == c) {
            ++at;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw SpecError("expression '" + s + "': " + what);
    }

    static AffineExpr mul(const AffineExpr& a, const AffineExpr& b, ExprParser& p) {
        bool a_var = a.cx != 0.0 || a.cy != 0.0;
        bool b_var = b.cx != 0.0 || b.cy != 0.0;
        if (a_var && b_var) p.fail("non-affine product of coordinates");
        const AffineExpr& var = a_var ? a : b;
        double k = a_var ? b.c : a.c;
        return {var.c * k, var.cx * k, var.cy * k};
    }

    AffineExpr factor() {
        skip_ws();
        if (at >= s.size()) fail("unexpected end");
        char c = s[at];
        if (c == '-') {
            ++at;
            AffineExpr f = factor();
            return {-f.c, -f.cx, -f.cy};
        }
        if (c == '+') {
            ++at;
            return factor();
        }
        if (c == '(') {
            ++at;
            AffineExpr e = expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (c == 'x') {
            ++at;
            return {0.0, 1.0, 0.0};
        }
        if (c == 'y') {
            ++at;
            return {0.0, 0.0, 1.0};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t end = at;
            while (end < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
                    s[end] == 'e' || s[end] == 'E' ||
                    ((s[end] == '+' || s[end] == '-') && (s[end - 1] == 'e' || s[end - 1] == 'E'))))
                ++end;
            double v = 0.0;
            try {
                v = std::stod(s.substr(at, end - at));
            } catch (...) {
                fail("bad number");
            }
            at = end;
            return {v, 0.0, 0.0};
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    AffineExpr term() {
        AffineExpr acc = factor();
        while (eat('*')) acc = mul(acc, factor(), *this);
        return acc;
    }

    AffineExpr expr() {
        AffineExpr acc = term();
        for (;;) {
            skip_ws();
            if (at < s.size() && s[at] == '+') {
                ++at;
                AffineExpr t = term();
                acc = {acc.c + t.c, acc.cx + t.cx, acc.cy + t.cy};
            } else if (at < s.size() && s[at] == '-') {
                ++at;
                AffineExpr t = term();
                acc = {acc.c - t.c, acc.cx - t.cx, acc.cy - t.cy};
            } else {
                break;
            }
        }
        return acc;
    }
};

} // namespace

AffineExpr parse_affine_expr(const std::string& text) {
    ExprParser p(text);
    AffineExpr e = p.expr();
    p.skip_ws();
    if (p.at != text.size())
        throw SpecError("expression '" + text + "': trailing characters at position " +
                        std::to_string(p.at));
    return e;
}

// ---- JSON schema ------------------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
    throw SpecError(where + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) schema_fail(where, "missing field '" + key + "'");
    return j.at(key);
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_number()) schema_fail(where, "field '" + key + "' must be a number");
    return v.get<double>();
}

std::string require_string(const json& j, const std::string& key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_string()) schema_fail(where, "field '" + key + "' must be a string");
    return v.get<std::string>();
}

Vec2 require_point(const json& j, const std::string& key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        schema_fail(where, "field '" + key + "' must be [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

AffineExpr expr_field(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0, 0.0};
    if (v.is_string()) return parse_affine_expr(v.get<std::string>());
    schema_fail(where, "expected a number or an expression string");
}

} // namespace

ProblemSpec parse_problem(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("problem file is not valid JSON: ") + e.what());
    }
    ProblemSpec spec;

    if (!j.contains("spec_version") || !j["spec_version"].is_number_integer())
        schema_fail("problem", "missing integer field 'spec_version'");
    spec.spec_version = j["spec_version"].get<int>();
    if (spec.spec_version != 1)
        schema_fail("problem", "unsupported spec_version " + std::to_string(spec.spec_version));

    spec.name = j.value("name", "unnamed");
    spec.notes = j.value("notes", "");
    spec.benchmark = j.value("benchmark", "");
    if (!spec.benchmark.empty() && spec.benchmark != "pure_bending")
        schema_fail("problem", "unknown benchmark '" + spec.benchmark + "'");

    {
        const json& m = require(j, "material", "problem");
        double E = require_number(m, "E", "material");
        double nu = require_number(m, "nu", "material");
        std::string mode = m.value("mode", "plane_strain");
        ElasticMode em;
        if (mode == "plane_strain")
            em = ElasticMode::PlaneStrain;
        else if (mode == "plane_stress")
            em = ElasticMode::PlaneStress;
        else
            schema_fail("material", "mode must be 'plane_strain' or 'plane_stress'");
        try {
            spec.material = Material(E, nu, em);
        } catch (const ConfigError& e) {
            schema_fail("material", e.what());
        }
    }

    {
        const json& g = require(j, "geometry", "problem");
        spec.alpha1 = g.value("alpha1", -0.8);
        spec.alpha3 = g.value("alpha3", 0.8);
        const json& segs = require(g, "segments", "geometry");
        if (!segs.is_array() || segs.empty())
            schema_fail("geometry", "'segments' must be a non-empty array");
        for (size_t i = 0; i < segs.size(); ++i) {
            std::string where = "geometry.segments[" + std::to_string(i) + "]";
            const json& s = segs[i];
            std::string id = require_string(s, "id", where);
            std::string kind = require_string(s, "kind", where);
            const json& ne = require(s, "elements", where);
            if (!ne.is_number_integer() || ne.get<int>() < 1)
                schema_fail(where, "'elements' must be a positive integer");
            if (kind == "line") {
                spec.segments.push_back(GeometrySegment::line(
                    id, require_point(s, "from", where), require_point(s, "to", where),
                    ne.get<int>()));
            } else if (kind == "arc") {
                double deg2rad = 3.14159265358979323846 / 180.0;
                spec.segments.push_back(GeometrySegment::arc(
                    id, require_point(s, "center", where), require_number(s, "radius", where),
                    require_number(s, "start_deg", where) * deg2rad,
                    require_number(s, "end_deg", where) * deg2rad, ne.get<int>()));
            } else {
                schema_fail(where, "kind must be 'line' or 'arc'");
            }
        }
    }

    {
        const json& bcs = require(j, "boundary_conditions", "problem");
        if (!bcs.is_array()) schema_fail("problem", "'boundary_conditions' must be an array");
        for (size_t i = 0; i < bcs.size(); ++i) {
            std::string where = "boundary_conditions[" + std::to_string(i) + "]";
            const json& b = bcs[i];
            SegmentBC sb;
            sb.segment = require_string(b, "segment", where);
            bool has1 = false, has2 = false;
            for (auto it = b.begin(); it != b.end(); ++it) {
                const std::string& key = it.key();
                if (key == "segment") continue;
                if (key == "u1" || key == "t1") {
                    if (has1) schema_fail(where, "direction 1 specified twice");
                    has1 = true;
                    sb.kind1 = key[0] == 'u' ? BCKind::Dirichlet : BCKind::Neumann;
                    sb.value1 = expr_field(it.value(), where + "." + key);
                } else if (key == "u2" || key == "t2") {
                    if (has2) schema_fail(where, "direction 2 specified twice");
                    has2 = true;
                    sb.kind2 = key[0] == 'u' ? BCKind::Dirichlet : BCKind::Neumann;
                    sb.value2 = expr_field(it.value(), where + "." + key);
                } else {
                    schema_fail(where, "unknown field '" + key + "' (expected u1/t1 and u2/t2)");
                }
            }
            if (!has1 || !has2)
                schema_fail(where, "each direction needs exactly one of u<i>/t<i>");
            spec.segment_bcs.push_back(sb);
        }
    }

    if (j.contains("point_constraints")) {
        const json& pcs = j["point_constraints"];
        if (!pcs.is_array()) schema_fail("problem", "'point_constraints' must be an array");
        for (size_t i = 0; i < pcs.size(); ++i) {
            std::string where = "point_constraints[" + std::to_string(i) + "]";
            const json& p = pcs[i];
            PointConstraint pc;
            pc.segment = require_string(p, "segment", where);
            pc.near = require_point(p, "near", where);
            std::string set = require_string(p, "set", where);
            if (set.size() != 2 || (set[0] != 'u' && set[0] != 't') ||
                (set[1] != '1' && set[1] != '2'))
                schema_fail(where, "'set' must be one of u1, u2, t1, t2");
            pc.kind = set[0] == 'u' ? BCKind::Dirichlet : BCKind::Neumann;
            pc.direction = set[1] - '1';
            pc.value = expr_field(require(p, "value", where), where + ".value");
            spec.point_constraints.push_back(pc);
        }
    }

    if (j.contains("network")) {
        const json& n = j["network"];
        std::string where = "network";
        if (n.contains("hidden")) {
            if (!n["hidden"].is_array() || n["hidden"].empty())
                schema_fail(where, "'hidden' must be a non-empty array of widths");
            spec.network.hidden.clear();
            for (const auto& w : n["hidden"]) {
                if (!w.is_number_integer() || w.get<int>() < 1)
                    schema_fail(where, "hidden widths must be positive integers");
                spec.network.hidden.push_back(w.get<int>());
            }
        }
        if (n.contains("activation"))
            spec.network.activation = activation_from_name(require_string(n, "activation", where));
        if (n.contains("output")) {
            std::string o = require_string(n, "output", where);
            if (o == "displacement")
                spec.network.mode = OutputMode::Displacement;
            else if (o == "direct_traction")
                spec.network.mode = OutputMode::DirectTraction;
            else
                schema_fail(where, "output must be 'displacement' or 'direct_traction'");
        }
        if (n.contains("output_scale")) {
            const json& os = n["output_scale"];
            if (os.is_string() && os.get<std::string>() == "auto")
                spec.network.output_scale = 0.0;
            else if (os.is_number() && os.get<double>() > 0.0)
                spec.network.output_scale = os.get<double>();
            else
                schema_fail(where, "output_scale must be 'auto' or a positive number");
        }
        if (n.contains("seed")) {
            if (!n["seed"].is_number_unsigned() && !n["seed"].is_number_integer())
                schema_fail(where, "seed must be an integer");
            spec.network.seed = n["seed"].get<std::uint64_t>();
        }
    }

    if (j.contains("training")) {
        const json& t = j["training"];
        std::string where = "training";
        spec.training.iterations = t.value("iterations", spec.training.iterations);
        if (spec.training.iterations < 1) schema_fail(where, "iterations must be >= 1");
        spec.training.learning_rate = t.value("learning_rate", spec.training.learning_rate);
        if (!(spec.training.learning_rate > 0.0)) schema_fail(where, "learning_rate must be > 0");
        spec.training.lr_final = t.value("lr_final", spec.training.lr_final);
        spec.training.beta1 = t.value("beta1", spec.training.beta1);
        spec.training.beta2 = t.value("beta2", spec.training.beta2);
        spec.training.epsilon = t.value("epsilon", spec.training.epsilon);
        spec.training.log_every = t.value("log_every", spec.training.log_every);
    }

    if (j.contains("quadrature")) {
        const json& q = j["quadrature"];
        spec.quadrature.order = q.value("order", spec.quadrature.order);
        if (spec.quadrature.order < 1 || spec.quadrature.order > 64)
            schema_fail("quadrature", "order must be in [1, 64]");
        std::string sing = q.value("singular", "rigid_body");
        if (sing == "rigid_body")
            spec.quadrature.t_path = SingularTPath::RigidBody;
        else if (sing == "guiggiani")
            spec.quadrature.t_path = SingularTPath::Guiggiani;
        else
            schema_fail("quadrature", "singular must be 'rigid_body' or 'guiggiani'");
        spec.quadrature.max_subdivision_depth =
            q.value("subdivision_depth", spec.quadrature.max_subdivision_depth);
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        if (o.contains("grid")) {
            const json& g = o["grid"];
            if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() ||
                !g[1].is_number_integer())
                schema_fail("output", "'grid' must be [nx, ny]");
            spec.output.grid_nx = g[0].get<int>();
            spec.output.grid_ny = g[1].get<int>();
            if (spec.output.grid_nx < 1 || spec.output.grid_ny < 1)
                schema_fail("output", "grid dimensions must be positive");
        }
        spec.output.clearance_fraction = o.value("clearance_fraction", 0.02);
    }

    return spec;
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open problem file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

std::vector<std::string> validate_problem(const ProblemSpec& spec) {
    std::vector<std::string> issues;
    BoundaryMesh mesh;
    try {
        mesh = build_mesh(spec.segments, spec.alpha1, spec.alpha3);
    } catch (const std::exception& e) {
        issues.push_back(std::string("geometry: ") + e.what());
        return issues;
    }
    BoundaryConditions bcs;
    try {
        bcs = bind_bcs(mesh, spec.segment_bcs, spec.point_constraints);
    } catch (const std::exception& e) {
        issues.push_back(std::string("boundary conditions: ") + e.what());
        return issues;
    }
    if (auto issue = well_posedness_issue(mesh, bcs)) issues.push_back("well-posedness: " + *issue);
    return issues;
}

} // namespace binn
