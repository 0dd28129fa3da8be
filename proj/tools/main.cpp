#include "lagsurg/cone.hpp"
#include "lagsurg/errors.hpp"
#include "lagsurg/examples.hpp"
#include "lagsurg/floer.hpp"
#include "lagsurg/io.hpp"
#include "lagsurg/mc.hpp"
#include "lagsurg/surgery.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace lagsurg;
using nlohmann::json;

namespace {

struct Flags {
    std::string trunc;
    std::string caps;
    double tol = 1e-9;
    int branch = 0;
    std::string sign_flags;
    bool example_mode = false;
    std::string delta;
    std::string out;
};

novikov::Rational parse_rational_flag(const std::string& s, const std::string& flag) {
    try {
        return novikov::parse_rational(s);
    } catch (const Error& e) {
        fail(ErrorCode::ParseError, flag + ": " + e.detail());
    }
}

ainfty::Algebra load_algebra(const std::string& path, const Flags& f) {
    auto A = io::algebra_from_json(io::read_file(path));
    if (!f.trunc.empty()) A.options().trunc = novikov::Ext(parse_rational_flag(f.trunc, "--trunc"));
    return A;
}

ainfty::Cochain load_cochain(const std::string& path) { return io::cochain_from_json(io::read_file(path)); }

novikov::Rational delta_for(const ainfty::Algebra& A, const Flags& f) {
    if (!f.delta.empty()) return parse_rational_flag(f.delta, "--delta");
    return A.options().delta_gap * novikov::Rational(9, 10);
}

void apply_caps(surgery::Caps& caps, const Flags& f) {
    if (f.caps.empty()) return;
    auto comma = f.caps.find(',');
    try {
        caps.R = std::stoi(f.caps.substr(0, comma));
        if (comma != std::string::npos) caps.S = std::stoi(f.caps.substr(comma + 1));
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "--caps expects R,S");
    }
}

// Comma-separated: sigma_1=-1, sigma_n=-1, meridian_minus, literal_dpsi.
void apply_sign_flags(surgery::SurgeryData& S, const Flags& f) {
    std::stringstream ss(f.sign_flags);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item == "meridian_minus")
            S.meridian_minus = true;
        else if (item == "literal_dpsi")
            S.literal_dpsi = true;
        else if (item == "sigma_1=-1" || item == "sigma_1=1")
            S.sigma_1_sign = item == "sigma_1=-1" ? -1 : 1;
        else if (item == "sigma_n=-1" || item == "sigma_n=1")
            S.sigma_n_sign = item == "sigma_n=-1" ? -1 : 1;
        else
            fail(ErrorCode::ParseError, "unknown sign flag '" + item + "'");
    }
}

void emit(const Flags& f, const std::string& name, const json& j) {
    if (f.out.empty()) return;
    fs::create_directories(f.out);
    io::write_file((fs::path(f.out) / name).string(), j);
}

std::string str(const novikov::Element& e) { return novikov::to_string(e); }

void print_hf(const std::string& label, const floer::HFReport& r) {
    std::cout << label << ": dim HF = " << r.dim << "  (generators " << r.generators << ", rank " << r.cert.rank
              << ", margin " << novikov::format_ext(r.cert.margin) << (r.cert.below_safety ? ", below safety gap" : "")
              << ")\n";
    for (const auto& p : r.cert.pivots)
        std::cout << "    pivot row " << p.row << " col " << p.col << " val " << novikov::format_rational(p.val) << "\n";
}

std::optional<floer::HFReport> try_hf(const ainfty::Algebra& A, const ainfty::Cochain& b, std::string& why) {
    try {
        return floer::hf_dimension(A, b);
    } catch (const Error& e) {
        why = std::string(error_name(e.code())) + ": " + e.detail();
        return std::nullopt;
    }
}

// ---- validate ----

int cmd_validate(const std::vector<std::string>& paths, const Flags& f) {
    std::vector<std::string> problems;
    std::optional<ainfty::Algebra> algebra;
    std::optional<ainfty::Cochain> cochain;
    std::optional<io::SurgeryInput> spec;
    auto complex_problems = [&](const std::string& path, const cellular::CellComplex& C) {
        for (const auto& v : cellular::validate_complex(C))
            problems.push_back(path + ": " + v.kind + " (" + v.a + ", " + v.b + "): " + v.message);
    };
    for (const auto& path : paths) {
        json j = io::read_file(path);
        if (j.contains("complex") && j.contains("atlas")) {
            auto A = io::algebra_from_json(j);
            complex_problems(path, A.complex());
            for (const auto& v : ainfty::validate_atlas(A))
                problems.push_back(path + ": " + v.kind + " (disk " + std::to_string(v.disk) + "): " + v.message);
            algebra = std::move(A);
        } else if (j.contains("cells")) {
            complex_problems(path, io::complex_from_json(j));
        } else if (j.contains("x") && j.contains("xbar")) {
            spec = io::surgery_from_json(j);
            if (spec->target) complex_problems(path, *spec->target);
        } else if (j.contains("minus") && j.contains("plus")) {
            auto B = io::bimodule_from_json(j);
            complex_problems(path, B.minus);
            complex_problems(path, B.plus);
            try {
                auto U = cone::union_algebra(B);
                for (const auto& v : ainfty::validate_atlas(U))
                    problems.push_back(path + ": " + v.kind + " (disk " + std::to_string(v.disk) + "): " + v.message);
            } catch (const Error& e) {
                problems.push_back(path + ": " + std::string(error_name(e.code())) + ": " + e.detail());
            }
        } else if (j.contains("x") && j.contains("b")) {
            io::cochain_from_json(j.at("b"));
        } else {
            cochain = io::cochain_from_json(j);
        }
    }
    if (algebra && cochain) {
        auto d = delta_for(*algebra, f);
        auto chk = mc::check_candidate(*algebra, *cochain, d);
        if (!chk.ok) problems.push_back("cochain: NotAdmissible: " + chk.reason);
        if (spec) {
            auto adm = mc::admissible(*algebra, *cochain, spec->data.x, d, f.example_mode || spec->annotated);
            if (!adm.ok) problems.push_back("surgery: NotAdmissible: " + adm.failed);
        }
    }
    for (const auto& p : problems) std::cout << p << "\n";
    std::cout << (problems.empty() ? "clean" : std::to_string(problems.size()) + " violation(s)") << "\n";
    return problems.empty() ? 0 : 1;
}

// ---- potential / mc-check / gauge-away / hf ----

int cmd_potential(const std::string& apath, const std::string& bpath, const Flags& f) {
    auto A = load_algebra(apath, f);
    auto b = load_cochain(bpath);
    auto p = mc::potential(A, b, delta_for(A, f));
    std::cout << "W    = " << str(p.W) << "\nflat = " << (p.flat ? "true" : "false") << "\n";
    if (!p.flat) std::cout << "residual = " << ainfty::to_string(p.residual) << "\n";
    emit(f, "potential.json", {{"W", io::to_json(p.W)}, {"flat", p.flat}, {"residual", io::to_json(p.residual)}});
    return 0;
}

int cmd_mc_check(const std::string& apath, const std::string& bpath, const Flags& f) {
    auto A = load_algebra(apath, f);
    auto b = load_cochain(bpath);
    auto d = delta_for(A, f);
    auto chk = mc::check_candidate(A, b, d);
    std::cout << "shifted valuation = " << novikov::format_ext(mc::shifted_valuation(A, b, d)) << "\n";
    if (!chk.ok) {
        std::cout << "not a candidate: " << chk.reason << "\n";
        return 1;
    }
    auto p = mc::potential(A, b, d);
    std::cout << "residual = " << ainfty::to_string(p.residual) << "\nprojectively flat = " << (p.flat ? "true" : "false")
              << "\n";
    emit(f, "mc_check.json", {{"residual", io::to_json(p.residual)}, {"flat", p.flat}, {"W", io::to_json(p.W)}});
    return p.flat ? 0 : 1;
}

int cmd_gauge_away(const std::string& apath, const std::string& bpath, const std::string& ball, const Flags& f) {
    auto A = load_algebra(apath, f);
    auto b = load_cochain(bpath);
    std::stringstream ss(ball);
    cellular::StandardBall B;
    if (!std::getline(ss, B.top, ',') || !std::getline(ss, B.sphere, ',') || !std::getline(ss, B.point, ','))
        fail(ErrorCode::ParseError, "--ball expects top,sphere,point");
    mc::GaugeOptions opts;
    opts.delta = delta_for(A, f);
    auto r = mc::gauge_away(A, b, B, opts);
    std::cout << "steps = " << r.steps << "\nb = " << ainfty::to_string(r.b) << "\n";
    emit(f, "b_gauged.json", io::to_json(r.b));
    return 0;
}

int cmd_hf(const std::string& apath, const std::string& bpath, const Flags& f) {
    auto A = load_algebra(apath, f);
    auto b = load_cochain(bpath);
    auto r = floer::hf_dimension(A, b);
    print_hf("HF", r);
    emit(f, "hf.json", io::to_json(r));
    return 0;
}

// ---- surger ----

int cmd_surger(const std::string& apath, const std::string& bpath, const std::string& spath, const Flags& f) {
    auto A0 = load_algebra(apath, f);
    auto b0 = load_cochain(bpath);
    auto spec = io::surgery_from_json(io::read_file(spath));
    auto& S = spec.data;
    apply_caps(spec.caps, f);
    apply_sign_flags(S, f);
    if (f.branch != 0) S.branch = f.branch;
    const auto delta = delta_for(A0, f);
    const bool example = f.example_mode || spec.annotated;

    auto adm = mc::admissible(A0, b0, S.x, delta, example);
    if (!adm.ok) fail(ErrorCode::NotAdmissible, adm.failed);
    auto W0 = mc::potential(A0, b0, delta);

    json report;
    ainfty::Algebra Aeps;
    ainfty::Cochain beps;
    mc::Potential We;
    if (example) {
        if (!spec.target) fail(ErrorCode::InvalidInput, "example mode needs a target complex in the surgery file");
        Aeps = surgery::transform_annotated(A0, S, *spec.target, spec.target_local);
        beps = surgery::psi_annotated(A0, b0, S);
        We = mc::potential(Aeps, beps, delta);
    } else {
        auto T = surgery::transform_atlas(A0, S, b0, spec.caps);
        beps = surgery::psi(A0, b0, S, delta);
        Aeps = T.algebra;
        We = mc::potential(Aeps, beps, delta, mc::Positivity::Relaxed);
        auto curve = surgery::verify_curve_identity(A0, T, S, b0, spec.caps, f.tol);
        auto resum = surgery::resummation_check(T, A0, b0, S, spec.caps, f.tol);
        std::cout << "curve identity (" << (curve.pass ? "pass" : "FAIL") << ")\n";
        std::cout << "  " << std::left << std::setw(12) << "sigma" << std::setw(11) << "form" << std::setw(14) << "diff"
                  << std::setw(14) << "tail"
                  << "ok\n";
        for (const auto& r : curve.rows)
            std::cout << "  " << std::setw(12) << r.sigma << std::setw(11) << r.form << std::setw(14) << r.diff
                      << std::setw(14) << r.tail << (r.pass ? "yes" : "NO") << "\n";
        std::size_t bad = 0;
        for (const auto& c : resum) bad += c.ok ? 0 : 1;
        std::cout << "resummation: " << resum.size() << " families, " << bad << " failing\n";
        report["curve_identity"] = io::to_json(curve);
        report["resummation"] = io::to_json(resum);
    }
    std::cout << "W before = " << str(W0.W) << (W0.flat ? "" : " (not flat)") << "\n";
    std::cout << "W after  = " << str(We.W) << (We.flat ? "" : " (not flat)") << "\n";
    std::cout << "b_eps    = " << ainfty::to_string(beps) << "\n";
    report["W_before"] = io::to_json(W0.W);
    report["W_after"] = io::to_json(We.W);
    report["flat_before"] = W0.flat;
    report["flat_after"] = We.flat;

    std::string why;
    if (W0.flat) {
        if (auto h = try_hf(A0, b0, why)) {
            print_hf("HF before", *h);
            report["hf_before"] = io::to_json(*h);
        } else {
            std::cout << "HF before unavailable: " << why << "\n";
        }
    }
    if (We.flat) {
        if (auto h = try_hf(Aeps, beps, why)) {
            print_hf("HF after", *h);
            report["hf_after"] = io::to_json(*h);
        } else {
            std::cout << "HF after unavailable: " << why << "\n";
        }
    }
    emit(f, "b_eps.json", io::to_json(beps));
    emit(f, "surgered_algebra.json", io::to_json(Aeps));
    emit(f, "report.json", report);
    return 0;
}

// ---- cone ----

int cmd_cone(const std::string& bpath, const std::string& cpath, const Flags& f) {
    auto B = io::bimodule_from_json(io::read_file(bpath));
    if (!f.trunc.empty()) B.options.trunc = novikov::Ext(parse_rational_flag(f.trunc, "--trunc"));
    json c = io::read_file(cpath);
    auto get_cochain = [&](const char* key) {
        return c.contains(key) ? io::cochain_from_json(c[key]) : ainfty::Cochain{};
    };
    std::string x = c.value("x", "x");
    auto A_eps = novikov::parse_rational(c.value("A_eps", "1/2"));
    std::size_t max_len = c.value("max_len", std::size_t{3});
    auto r = cone::compare_cone_surgery(B, x, A_eps, get_cochain("b"), get_cochain("b_minus"), get_cochain("b_plus"),
                                        max_len);
    std::cout << "words compared = " << r.words << "\ndiscrepancy    = " << r.discrepancy << "\n";
    if (r.discrepancy > 0) {
        std::cout << "worst word     =";
        for (const auto& g : r.worst_word) std::cout << " " << g;
        std::cout << "\n";
    }
    emit(f, "cone_report.json",
         {{"words", r.words}, {"discrepancy", r.discrepancy}, {"worst_word", r.worst_word}});
    emit(f, "surgered_algebra.json", io::to_json(r.surgered));
    return r.discrepancy == 0 ? 0 : 1;
}

// ---- example ----

int cmd_example(const std::string& name, const Flags& f) {
    auto files = examples::bundle(name);
    std::string dir = f.out.empty() ? "." : f.out;
    fs::create_directories(dir);
    for (const auto& [file, j] : files) {
        auto p = fs::path(dir) / file;
        io::write_file(p.string(), j);
        std::cout << "wrote " << p.string() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lagrangian surgery and cellular Fukaya algebra toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--trunc", f.trunc, "Truncation order p/q (default 6)");
    app.add_option("--caps", f.caps, "Insertion caps R,S (default 12,12)");
    app.add_option("--tol", f.tol, "Relative tolerance")->capture_default_str();
    app.add_option("--branch", f.branch, "Logarithm branch");
    app.add_option("--sign-flags", f.sign_flags, "sigma_1=-1,sigma_n=-1,meridian_minus,literal_dpsi");
    app.add_flag("--example-mode", f.example_mode, "Dimension-one annotated surgery");
    app.add_option("--delta", f.delta, "MC shift delta p/q (default 9/10 of the corner gap)");
    app.add_option("-o,--out", f.out, "Output directory for JSON reports");

    std::vector<std::string> paths;
    auto* validate = app.add_subcommand("validate", "Check complexes, atlases, cochains and surgery data");
    validate->add_option("paths", paths, "Input files")->required()->check(CLI::ExistingFile);

    std::string apath, bpath, spath, ball = "ball+,sph+,pt+", name;
    auto* potential = app.add_subcommand("potential", "Disk potential of a bounding cochain");
    auto* mccheck = app.add_subcommand("mc-check", "Maurer-Cartan residual and flatness");
    auto* gauge = app.add_subcommand("gauge-away", "Gauge a cochain off the sphere of a standard ball");
    auto* hf = app.add_subcommand("hf", "Floer cohomology dimension with rank certificate");
    auto* surger = app.add_subcommand("surger", "Surger at a self-intersection and verify");
    for (auto* s : {potential, mccheck, gauge, hf, surger}) {
        s->add_option("--algebra", apath, "Algebra JSON")->required()->check(CLI::ExistingFile);
        s->add_option("--b,--b0", bpath, "Cochain JSON")->required()->check(CLI::ExistingFile);
    }
    gauge->add_option("--ball", ball, "Standard ball top,sphere,point")->capture_default_str();
    surger->add_option("--surgery", spath, "Surgery JSON")->required()->check(CLI::ExistingFile);

    std::string cpath;
    auto* cone_cmd = app.add_subcommand("cone", "Compare a mapping cone with the surgered algebra");
    cone_cmd->add_option("--bimodule", bpath, "Bimodule atlas JSON")->required()->check(CLI::ExistingFile);
    cone_cmd->add_option("--cone", cpath, "Cone data JSON")->required()->check(CLI::ExistingFile);

    auto* example = app.add_subcommand("example", "Write a bundled input set");
    example->add_option("name", name, "immersed-circle | embedded-pair-cone | dim3-synthetic")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(paths, f);
        if (potential->parsed()) return cmd_potential(apath, bpath, f);
        if (mccheck->parsed()) return cmd_mc_check(apath, bpath, f);
        if (gauge->parsed()) return cmd_gauge_away(apath, bpath, ball, f);
        if (hf->parsed()) return cmd_hf(apath, bpath, f);
        if (surger->parsed()) return cmd_surger(apath, bpath, spath, f);
        if (cone_cmd->parsed()) return cmd_cone(bpath, cpath, f);
        if (example->parsed()) return cmd_example(name, f);
    } catch (const Error& e) {
        std::cerr << "error: " << error_name(e.code()) << ": " << e.detail() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
