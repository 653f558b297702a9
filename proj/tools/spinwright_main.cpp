// spinwright: command-line front end for the conformal spin-transform
// pipeline.  Subcommands generate test meshes, synthesize transforms with a
// prescribed mean-curvature half-density change, and run the diagnostic
// suites (curvature/umbilics, pairwise comparison, Dirac kernel studies).
//
// All reports are JSON with sorted keys, a schema marker, the library
// version and the full run configuration, so identical invocations produce
// bit-identical bytes.  Exit codes: 0 success, 2 bad parameters or I/O,
// 3 transform produced a degenerate (non-immersive) spot but the mesh was
// still written.
#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinwright/bonnet.hpp"
#include "spinwright/curvature.hpp"
#include "spinwright/dirac.hpp"
#include "spinwright/errors.hpp"
#include "spinwright/mesh.hpp"
#include "spinwright/mesh_generators.hpp"
#include "spinwright/obj_io.hpp"
#include "spinwright/quad_diff.hpp"
#include "spinwright/spin_transform.hpp"
#include "spinwright/version.hpp"

using nlohmann::json;
using namespace spinwright;

namespace {

struct RunConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::string output;
    std::string report_path;
    std::string rho_spec;
    double eigen_tol = 1e-10;
    std::uint64_t seed = 0;
    int refinements = 2;
    double umbilic_tol = 0.05;
    double iso_tol = 1e-3;
    double zero_tol = 0.05;
    int spectrum_count = 6;
    std::string kind;
    int level = 3;
    double semi_a = 1.0, semi_b = 1.0, semi_c = 1.0;
    double major_radius = 2.0, minor_radius = 1.0;
    int nu = 32, nv = 16;
};

json config_json(const RunConfig& cfg) {
    return json{{"subcommand", cfg.subcommand},
                {"inputs", cfg.inputs},
                {"output", cfg.output},
                {"report", cfg.report_path},
                {"rho", cfg.rho_spec},
                {"eigen_tol", cfg.eigen_tol},
                {"seed", cfg.seed},
                {"refinements", cfg.refinements},
                {"umbilic_tol", cfg.umbilic_tol},
                {"iso_tol", cfg.iso_tol},
                {"zero_tol", cfg.zero_tol},
                {"spectrum_count", cfg.spectrum_count},
                {"kind", cfg.kind},
                {"level", cfg.level},
                {"semi_axes", {cfg.semi_a, cfg.semi_b, cfg.semi_c}},
                {"torus_radii", {cfg.major_radius, cfg.minor_radius}},
                {"torus_resolution", {cfg.nu, cfg.nv}}};
}

// JSON serializes NaN/inf as null, which would break the fixed report
// schema; clamp to a huge sentinel instead.
double finite(double x) {
    if (std::isnan(x)) return 1e12;
    if (std::isinf(x)) return x > 0 ? 1e12 : -1e12;
    return x;
}

json vec3_json(const Eigen::Vector3d& v) {
    return json{finite(v.x()), finite(v.y()), finite(v.z())};
}

void emit_report(const RunConfig& cfg, json body) {
    body["schema"] = 1;
    body["version"] = kVersion;
    body["config"] = config_json(cfg);
    const std::string text = body.dump(2) + "\n";
    if (cfg.report_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.report_path, std::ios::binary);
    if (!out) throw InputError("cannot open report file " + cfg.report_path);
    out << text;
    if (!out) throw InputError("failed writing report " + cfg.report_path);
}

// Gaussian bump of the prescribed density in geodesic angle around the
// point where `axis` leaves the area centroid.
HalfDensityField lobe_field(const TriMesh& m, const Eigen::Vector3d& axis,
                            double amplitude, double width) {
    const Eigen::Vector3d c = m.area_centroid();
    const Eigen::Vector3d a = axis.normalized();
    HalfDensityField f = HalfDensityField::zero(m.vertex_count());
    for (int i = 0; i < m.vertex_count(); ++i) {
        const Eigen::Vector3d d = (m.positions[i] - c).normalized();
        const double theta = std::acos(std::clamp(d.dot(a), -1.0, 1.0));
        f.values[i] =
            amplitude * std::exp(-theta * theta / (2.0 * width * width));
    }
    return f;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InputError("cannot parse " + what + " from '" + s + "'");
    }
    if (used != s.size())
        throw InputError("trailing characters in " + what + " '" + s + "'");
    return value;
}

// rho specs: const:<c>, lobe:<axis>:<amp>:<width>, file:<path>, own.
HalfDensityField parse_rho(const std::string& spec, const TriMesh& m) {
    if (spec == "own") return own_half_density(m);
    const auto parts = split(spec, ':');
    if (parts.empty()) throw InputError("empty rho spec");
    if (parts[0] == "const" && parts.size() == 2) {
        HalfDensityField f = HalfDensityField::zero(m.vertex_count());
        const double c = parse_double(parts[1], "rho constant");
        for (double& v : f.values) v = c;
        return f;
    }
    if (parts[0] == "lobe" && parts.size() == 4) {
        Eigen::Vector3d axis;
        if (parts[1] == "x") axis = Eigen::Vector3d::UnitX();
        else if (parts[1] == "y") axis = Eigen::Vector3d::UnitY();
        else if (parts[1] == "z") axis = Eigen::Vector3d::UnitZ();
        else throw InputError("lobe axis must be x, y or z, got '" +
                              parts[1] + "'");
        const double amp = parse_double(parts[2], "lobe amplitude");
        const double width = parse_double(parts[3], "lobe width");
        if (width <= 0.0) throw InputError("lobe width must be positive");
        return lobe_field(m, axis, amp, width);
    }
    if (parts[0] == "file" && parts.size() == 2) {
        std::ifstream in(parts[1]);
        if (!in) throw InputError("cannot open rho file " + parts[1]);
        HalfDensityField f;
        double v = 0.0;
        while (in >> v) f.values.push_back(v);
        if (!in.eof())
            throw InputError("malformed number in rho file " + parts[1]);
        if (f.size() != m.vertex_count())
            throw InputError("rho file has " + std::to_string(f.size()) +
                             " values for " +
                             std::to_string(m.vertex_count()) + " vertices");
        return f;
    }
    throw InputError(
        "bad rho spec '" + spec +
        "' (expected const:<c>, lobe:<axis>:<amp>:<width>, file:<path>, own)");
}

int cmd_generate(const RunConfig& cfg) {
    TriMesh m = [&] {
        if (cfg.kind == "icosphere") return make_icosphere(cfg.level);
        if (cfg.kind == "ellipsoid")
            return make_ellipsoid(cfg.semi_a, cfg.semi_b, cfg.semi_c,
                                  cfg.level);
        if (cfg.kind == "torus")
            return make_torus(cfg.major_radius, cfg.minor_radius, cfg.nu,
                              cfg.nv);
        throw InputError("unknown mesh kind '" + cfg.kind + "'");
    }();
    save_obj(cfg.output, m);
    return 0;
}

int cmd_transform(const RunConfig& cfg) {
    const TriMesh m = load_obj(cfg.inputs[0]);
    const HalfDensityField rho = parse_rho(cfg.rho_spec, m);
    TransformOptions opts;
    opts.eigen.tol = cfg.eigen_tol;
    opts.eigen.seed = cfg.seed;
    opts.refinements = cfg.refinements;
    const SpinTransform t = spin_transform(m, rho, opts);
    save_obj(cfg.output, t.mesh);

    const TransformReport& r = t.report;
    json body;
    body["eigen_residual"] = finite(r.eigen_residual);
    body["closedness_rms"] = finite(r.closedness_rms);
    body["exactness_rms"] = finite(r.exactness_rms);
    body["qc_mean"] = finite(r.qc_mean);
    body["qc_max"] = finite(r.qc_max);
    body["halfdensity_l2_error"] = finite(r.halfdensity_l2_error);
    json periods = json::array();
    for (double p : r.period_norms) periods.push_back(finite(p));
    body["periods"] = periods;
    body["sigma"] = finite(r.sigma);
    body["lambda"] = finite(r.lambda);
    body["solvability_shift"] = finite(r.solvability_shift);
    body["dilation"] = finite(r.dilation);
    body["refinements_used"] = r.refinements_used;
    body["eigen_iterations"] = r.eigen_iterations;
    body["min_abs_psi"] = finite(r.min_abs_psi);
    body["nonvanishing"] = r.nonvanishing;
    emit_report(cfg, std::move(body));

    if (!r.nonvanishing) {
        std::cerr << "warning: transform spinor vanishes somewhere "
                     "(min |psi| = "
                  << r.min_abs_psi
                  << " of rms); output written but may degenerate\n";
        return 3;
    }
    return 0;
}

int cmd_diagnose(const RunConfig& cfg) {
    const TriMesh m = load_obj(cfg.inputs[0]);
    const CurvatureReport rep = curvature_report(m);
    const QuadDiffField hopf = hopf_differential(m);
    const UmbilicReport umb = umbilic_analysis(m, rep, cfg.umbilic_tol);

    double h_cotan_sq = 0.0, h_dihedral_sq = 0.0, defect_sum = 0.0;
    for (int v = 0; v < m.vertex_count(); ++v) {
        h_cotan_sq += rep.vertex_area[v] * rep.mean_h_cotan[v] *
                      rep.mean_h_cotan[v];
        h_dihedral_sq += rep.vertex_area[v] * rep.mean_h_dihedral[v] *
                         rep.mean_h_dihedral[v];
        defect_sum += rep.angle_defect[v];
    }
    double hopf_sq = 0.0, hopf_max = 0.0, hopf_min = 1e300, area = 0.0;
    for (int f = 0; f < m.face_count(); ++f) {
        const double mag = std::abs(hopf.values[f]);
        hopf_sq += m.face_area(f) * mag * mag;
        hopf_max = std::max(hopf_max, mag);
        hopf_min = std::min(hopf_min, mag);
        area += m.face_area(f);
    }

    json body;
    body["mesh"] = {{"vertices", m.vertex_count()},
                    {"edges", m.edge_count()},
                    {"faces", m.face_count()},
                    {"euler_characteristic", m.euler_characteristic()},
                    {"genus", m.genus()},
                    {"total_area", finite(rep.total_area)},
                    {"bounding_radius", finite(m.bounding_radius())},
                    {"mean_edge_length", finite(m.mean_edge_length())}};
    body["curvature"] = {
        {"h_cotan_rms", finite(std::sqrt(h_cotan_sq / rep.total_area))},
        {"h_dihedral_rms",
         finite(std::sqrt(h_dihedral_sq / rep.total_area))},
        {"willmore_energy", finite(rep.willmore_energy)},
        {"angle_defect_sum", finite(defect_sum)}};
    body["hopf"] = {
        {"rms", finite(std::sqrt(hopf_sq / area))},
        {"max", finite(hopf_max)},
        {"min", finite(hopf_min)},
        {"holomorphicity_residual",
         finite(holomorphicity_residual(m, hopf))}};
    json clusters = json::array();
    for (const UmbilicCluster& c : umb.clusters) {
        clusters.push_back(json{{"vertices", c.vertices},
                                {"size", c.vertices.size()},
                                {"index", c.index}});
    }
    body["umbilics"] = {{"vertices", umb.umbilic_vertices},
                        {"count", umb.umbilic_vertices.size()},
                        {"clusters", clusters},
                        {"cluster_count", umb.clusters.size()},
                        {"index_sum", umb.index_sum},
                        {"euler_characteristic", umb.euler_characteristic},
                        {"poincare_hopf_ok", umb.poincare_hopf_ok}};
    emit_report(cfg, std::move(body));
    return 0;
}

int cmd_compare(const RunConfig& cfg) {
    const TriMesh m1 = load_obj(cfg.inputs[0]);
    const TriMesh m2 = load_obj(cfg.inputs[1]);
    if (m1.vertex_count() != m2.vertex_count()) {
        throw InputError("meshes are not comparable: " +
                         std::to_string(m1.vertex_count()) + " vs " +
                         std::to_string(m2.vertex_count()) + " vertices");
    }

    json body;
    const CongruenceResult proper = congruence_check(m1, m2, false);
    const CongruenceResult improper = congruence_check(m1, m2, true);
    body["congruence"] = {
        {"congruent", proper.congruent},
        {"rms", finite(proper.rms)},
        {"congruent_with_reflection", improper.congruent},
        {"reflection_used", improper.motion.reflection},
        {"rms_with_reflection", finite(improper.rms)}};

    try {
        const ShapeDistortion d = shape_distortion(m1, m2, cfg.iso_tol);
        double peak = 0.0;
        for (const std::complex<double>& v : d.d20.values)
            peak = std::max(peak, std::abs(v));
        body["isometry"] = {{"isometric", true},
                            {"max_edge_strain", finite(d.max_edge_strain)}};
        body["distortion"] = {
            {"max_d20", finite(peak)},
            {"trace_residual", finite(d.trace_residual)},
            {"d20_holomorphicity",
             finite(holomorphicity_residual(m1, d.d20))}};
    } catch (const GeometryError& e) {
        body["isometry"] = {{"isometric", false}, {"error", e.what()}};
        body["distortion"] = nullptr;
    }

    const HalfspaceResult hs =
        gauss_map_halfspace_test(vertex_normals(m1), vertex_normals(m2));
    json half;
    half["in_halfspace"] = hs.in_halfspace;
    if (hs.in_halfspace) {
        half["witness"] = vec3_json(hs.witness);
        half["min_support"] = finite(hs.min_support);
        half["certificate"] = nullptr;
    } else {
        half["witness"] = nullptr;
        half["min_support"] = nullptr;
        json weights = json::array();
        for (double w : hs.certificate_weights) weights.push_back(finite(w));
        half["certificate"] = {{"indices", hs.certificate_indices},
                               {"weights", weights},
                               {"norm", finite(hs.certificate_norm)}};
    }
    body["gauss_map_halfspace"] = half;
    emit_report(cfg, std::move(body));
    return 0;
}

int cmd_kernel(const RunConfig& cfg) {
    const TriMesh m = load_obj(cfg.inputs[0]);
    const HalfDensityField rho = parse_rho(cfg.rho_spec, m);
    EigenOptions opts;
    opts.tol = cfg.eigen_tol;
    opts.seed = cfg.seed;
    const std::vector<DiracSolution> spectrum =
        dirac_low_spectrum(m, rho, cfg.spectrum_count, opts);

    int kernel_count = 0;
    for (const DiracSolution& s : spectrum)
        if (std::abs(s.lambda) < cfg.zero_tol) ++kernel_count;

    json modes = json::array();
    for (const DiracSolution& s : spectrum) {
        modes.push_back(json{{"sigma", finite(s.sigma)},
                             {"lambda", finite(s.lambda)},
                             {"residual", finite(s.residual)},
                             {"solvability_shift",
                              finite(s.solvability_shift)},
                             {"min_abs_psi", finite(s.min_abs_psi)},
                             {"nonvanishing", s.nonvanishing},
                             {"iterations", s.iterations}});
    }
    json body;
    body["spectrum"] = modes;
    body["kernel_count"] = kernel_count;
    // Separation between the kernel plateau and the first genuine mode.
    if (kernel_count > 0 &&
        kernel_count < static_cast<int>(spectrum.size())) {
        const double inside = std::max(
            std::abs(spectrum[kernel_count - 1].lambda), 1e-300);
        body["gap_ratio"] =
            finite(std::abs(spectrum[kernel_count].lambda) / inside);
    } else {
        body["gap_ratio"] = nullptr;
    }
    emit_report(cfg, std::move(body));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"conformal spin transforms with prescribed mean-curvature "
                 "half-density, plus rigidity diagnostics"};
    app.require_subcommand(1);

    CLI::App* gen = app.add_subcommand(
        "generate", "write a test mesh (icosphere, ellipsoid, torus) as OBJ");
    gen->add_option("kind", cfg.kind, "icosphere | ellipsoid | torus")
        ->required();
    gen->add_option("--level", cfg.level, "subdivision level");
    gen->add_option("--a", cfg.semi_a, "ellipsoid semi-axis x");
    gen->add_option("--b", cfg.semi_b, "ellipsoid semi-axis y");
    gen->add_option("--c", cfg.semi_c, "ellipsoid semi-axis z");
    gen->add_option("--R", cfg.major_radius, "torus centreline radius");
    gen->add_option("--r", cfg.minor_radius, "torus tube radius");
    gen->add_option("--nu", cfg.nu, "torus major resolution");
    gen->add_option("--nv", cfg.nv, "torus minor resolution");
    gen->add_option("-o,--output", cfg.output, "output OBJ path")->required();

    CLI::App* tra = app.add_subcommand(
        "transform",
        "synthesize the conformal transform prescribed by --rho");
    tra->add_option("input", cfg.inputs, "input OBJ")->expected(1)->required();
    tra->add_option("--rho", cfg.rho_spec,
                    "const:<c> | lobe:<axis>:<amp>:<width> | file:<path> | own")
        ->required();
    tra->add_option("-o,--output", cfg.output, "output OBJ path")->required();
    tra->add_option("--report", cfg.report_path,
                    "JSON report path (stdout when omitted)");
    tra->add_option("--tol", cfg.eigen_tol, "eigensolver tolerance")
        ->check(CLI::PositiveNumber);
    tra->add_option("--seed", cfg.seed, "eigensolver start-vector seed");
    tra->add_option("--refinements", cfg.refinements,
                    "correction re-solves after the first");

    CLI::App* dia = app.add_subcommand(
        "diagnose", "curvature, Hopf differential and umbilic report");
    dia->add_option("input", cfg.inputs, "input OBJ")->expected(1)->required();
    dia->add_option("--report", cfg.report_path,
                    "JSON report path (stdout when omitted)");
    dia->add_option("--umbilic-tol", cfg.umbilic_tol,
                    "relative principal-curvature gap for umbilics")
        ->check(CLI::PositiveNumber);

    CLI::App* cmp = app.add_subcommand(
        "compare",
        "isometry, shape distortion, congruence and Gauss-map tests");
    cmp->add_option("inputs", cfg.inputs, "two OBJ files")
        ->expected(2)
        ->required();
    cmp->add_option("--report", cfg.report_path,
                    "JSON report path (stdout when omitted)");
    cmp->add_option("--iso-tol", cfg.iso_tol,
                    "relative edge-strain bound for the isometry check")
        ->check(CLI::PositiveNumber);

    CLI::App* ker = app.add_subcommand(
        "kernel", "low Dirac spectrum and kernel count for a potential");
    ker->add_option("input", cfg.inputs, "input OBJ")->expected(1)->required();
    ker->add_option("--rho", cfg.rho_spec,
                    "const:<c> | lobe:<axis>:<amp>:<width> | file:<path> | own");
    ker->add_option("--report", cfg.report_path,
                    "JSON report path (stdout when omitted)");
    ker->add_option("--count", cfg.spectrum_count, "eigenpairs to compute")
        ->check(CLI::PositiveNumber);
    ker->add_option("--zero-tol", cfg.zero_tol,
                    "|lambda| threshold counting as kernel")
        ->check(CLI::PositiveNumber);
    ker->add_option("--tol", cfg.eigen_tol, "eigensolver tolerance")
        ->check(CLI::PositiveNumber);
    ker->add_option("--seed", cfg.seed, "eigensolver start-vector seed");

    ker->get_option("--rho")->default_str("own");
    cfg.rho_spec = "own";

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            cfg.subcommand = "generate";
            return cmd_generate(cfg);
        }
        if (tra->parsed()) {
            cfg.subcommand = "transform";
            return cmd_transform(cfg);
        }
        if (dia->parsed()) {
            cfg.subcommand = "diagnose";
            return cmd_diagnose(cfg);
        }
        if (cmp->parsed()) {
            cfg.subcommand = "compare";
            return cmd_compare(cfg);
        }
        cfg.subcommand = "kernel";
        return cmd_kernel(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
