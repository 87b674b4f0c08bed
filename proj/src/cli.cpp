#include "gribov/cli.hpp"

#include "gribov/deficiency.hpp"
#include "gribov/errors.hpp"
#include "gribov/inverse_op.hpp"
#include "gribov/io.hpp"
#include "gribov/jacobi.hpp"
#include "gribov/ortho_poly.hpp"
#include "gribov/verify.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gribov {

namespace {

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& detail) : Error("invalid_input", detail) {}
};

void write_error(std::ostream& err, const std::string& code, const std::string& detail) {
    err << Json{{"error", code}, {"detail", detail}}.dump() << '\n';
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const char* first = text.data() + pos;
        const char* last = text.data() + comma;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || first == last)
            throw InvalidInput("not a comma-separated number list: \"" + text + "\"");
        values.push_back(v);
        pos = comma + 1;
    }
    return values;
}

const char* format_name(OutputFormat f) {
    switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::svg: return "svg";
    }
    return "?";
}

// The first listed format is the default.
OutputFormat pick_format(const RunConfig& c, std::initializer_list<OutputFormat> allowed) {
    OutputFormat f = c.format.value_or(*allowed.begin());
    for (OutputFormat a : allowed)
        if (a == f) return f;
    throw InvalidInput(std::string("format ") + format_name(f) + " is not available for " + c.subcommand);
}

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidInput(what);
}

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
    OutputFormat f = pick_format(c, {OutputFormat::csv, OutputFormat::json});
    std::size_t n = c.n.value_or(16);
    require(n >= 1 && n <= kMaxTruncation, "--n must lie in [1, 4096]");
    SpectrumResult r = truncated_spectrum({c.mu, c.lambda, n}, c.tol);
    if (f == OutputFormat::json)
        emit_json(out, to_json(r));
    else
        spectrum_csv(r).write(out);
    return kExitOk;
}

int cmd_sigma0(const RunConfig& c, std::ostream& out) {
    OutputFormat f = pick_format(c, {OutputFormat::csv, OutputFormat::svg});
    require(c.method == "matrix" || c.method == "nystrom" || c.method == "both",
            "--method must be matrix, nystrom or both");
    require(!c.mu_list.empty(), "--mu needs at least one value");
    for (double mu : c.mu_list) require(mu > 0.0 && std::isfinite(mu), "sigma0 needs every mu > 0");
    std::size_t n = c.n.value_or(1024);
    require(n >= 2 && n <= kMaxTruncation, "--n must lie in [2, 4096]");
    const bool matrix = c.method != "nystrom", nystrom = c.method != "matrix";

    std::vector<Sigma0Point> curve;
    if (matrix) curve = sigma0_curve(c.lambda, c.mu_list, n, c.tol);
    std::vector<PerronResult> perron;
    if (nystrom)
        for (double mu : c.mu_list) perron.push_back(nystrom_perron({mu, c.lambda, c.L, c.nodes}));

    if (f == OutputFormat::svg) {
        std::vector<SvgSeries> series;
        if (matrix) {
            SvgSeries s{"matrix n=" + std::to_string(n), {}};
            for (const auto& pt : curve) s.points.emplace_back(pt.mu, pt.sigma0.real());
            series.push_back(std::move(s));
        }
        if (nystrom) {
            SvgSeries s{"nystrom " + std::to_string(c.nodes) + " nodes", {}};
            for (std::size_t i = 0; i < perron.size(); ++i) s.points.emplace_back(c.mu_list[i], perron[i].sigma0);
            series.push_back(std::move(s));
        }
        write_svg(out, "sigma0 against mu, lambda = " + format_double(c.lambda), "mu", "sigma0", series);
        return kExitOk;
    }

    CsvTable t;
    t.header = {"mu"};
    if (matrix) t.header.insert(t.header.end(), {"matrix_re", "matrix_im", "matrix_residual"});
    if (nystrom) t.header.insert(t.header.end(), {"nystrom", "nystrom_iterations"});
    if (matrix && nystrom) t.header.push_back("rel_diff");
    for (std::size_t i = 0; i < c.mu_list.size(); ++i) {
        std::vector<std::string> row{format_double(c.mu_list[i])};
        if (matrix) {
            row.push_back(format_double(curve[i].sigma0.real()));
            row.push_back(format_double(curve[i].sigma0.imag()));
            row.push_back(format_double(curve[i].residual));
        }
        if (nystrom) {
            row.push_back(format_double(perron[i].sigma0));
            row.push_back(std::to_string(perron[i].iterations));
        }
        if (matrix && nystrom)
            row.push_back(format_double(std::abs(perron[i].sigma0 - curve[i].sigma0) / std::abs(curve[i].sigma0)));
        t.add_row(std::move(row));
    }
    t.write(out);
    return kExitOk;
}

CoefficientVector read_input_vector(const std::string& path) {
    require(!path.empty(), "--input is required");
    std::ifstream in(path);
    require(bool(in), "cannot open input file " + path);
    Json j = Json::parse(in, nullptr, false);
    require(!j.is_discarded(), "input file is not valid JSON: " + path);
    try {
        return coefficient_vector_from_json(j);
    } catch (const DomainError& e) {
        throw InvalidInput(e.what());
    }
}

int cmd_kernel_apply(const RunConfig& c, std::ostream& out) {
    OutputFormat f = pick_format(c, {OutputFormat::csv, OutputFormat::svg});
    require(c.samples >= 2, "--samples must be >= 2");
    require(c.ymax > 0.0 && std::isfinite(c.ymax), "--ymax must be positive");
    CoefficientVector v = read_input_vector(c.input);
    require(v.basis() == Basis::u, "kernel-apply expects a u-basis vector");
    for (const cplx& x : v.entries()) require(x.imag() == 0.0, "kernel-apply takes real coefficients only");
    KernelSpec spec{c.mu, c.lambda, c.L, c.nodes};
    try {
        validate(spec);
    } catch (const DomainError& e) {
        throw InvalidInput(e.what());
    }

    std::vector<double> ys(c.samples);
    for (std::size_t i = 0; i < c.samples; ++i) ys[i] = c.ymax * double(i) / double(c.samples - 1);
    std::vector<double> values =
        apply_quadrature(spec, [&v](double s) { return evaluate_u_series(v, s).real(); }, ys);

    if (f == OutputFormat::svg) {
        SvgSeries s{"K v", {}};
        for (std::size_t i = 0; i < ys.size(); ++i) s.points.emplace_back(ys[i], values[i]);
        write_svg(out, "K v, mu = " + format_double(c.mu) + ", lambda = " + format_double(c.lambda), "y",
                  "value", {s});
        return kExitOk;
    }
    CsvTable t{{"y", "value"}, {}};
    for (std::size_t i = 0; i < ys.size(); ++i) t.add_row({format_double(ys[i]), format_double(values[i])});
    t.write(out);
    return kExitOk;
}

int cmd_inverse_check(const RunConfig& c, std::ostream& out) {
    pick_format(c, {OutputFormat::json});
    require(c.lambda > 0.0, "--lambda must be positive");
    require(c.nmax >= 2, "--nmax must be >= 2");
    double r = right_inverse_residual(c.lambda, c.nmax);
    Json conventions = Json::array(
        {"g prefactor is int_0^inf e^{-s^2/2} ds = sqrt(pi/2)",
         "v1 integrand uses e^{-s^2/2}",
         "odd coefficients gamma_n of v1 are taken positive, without an alternating sign",
         "v1 = (1/lambda) int_0^y phi, evaluated by quadrature"});
    emit_json(out, Json{{"lambda", c.lambda},
                        {"nmax", c.nmax},
                        {"max_residual", r},
                        {"conventions", conventions}});
    return kExitOk;
}

int cmd_deficiency(const RunConfig& c, std::ostream& out) {
    pick_format(c, {OutputFormat::json});
    require(c.p >= 1 && c.m >= 1, "--p and --m must be >= 1");
    require(c.jmax >= 50, "--jmax must be >= 50");
    emit_json(out, to_json(km_block_test(c.p, c.m, c.jmax).report));
    return kExitOk;
}

int cmd_polys(const RunConfig& c, std::ostream& out) {
    pick_format(c, {OutputFormat::json});
    auto kind = parse_poly_kind(c.kind);
    require(kind.has_value(), "unknown --kind " + c.kind);
    std::size_t n = c.n.value_or(5);
    switch (*kind) {
    case PolyKind::first:
    case PolyKind::second: {
        require(n >= 1, "--n must be >= 1 for first/second kind");
        FirstSecond v = first_second_eval(n, cplx(c.x_re, c.x_im));
        emit_json(out, Json{{"kind", c.kind},
                            {"n", n},
                            {"x_re", c.x_re},
                            {"x_im", c.x_im},
                            {"P", {v.P.real(), v.P.imag()}},
                            {"Q", {v.Q.real(), v.Q.imag()}}});
        return kExitOk;
    }
    case PolyKind::kouba_P:
    case PolyKind::kouba_Q: {
        require(n <= 60, "--n must be <= 60 for kouba families");
        KoubaPair k = kouba_polys(int(n));
        emit_json(out, to_json(*kind == PolyKind::kouba_P ? k.P : k.Q));
        return kExitOk;
    }
    case PolyKind::plasma_P:
    case PolyKind::plasma_Q: {
        require(n <= 20, "--n must be <= 20 for plasma families");
        PlasmaResult r = plasma_polys(int(n));
        emit_json(out, to_json(*kind == PolyKind::plasma_P ? r.P : r.Q));
        return kExitOk;
    }
    }
    return kExitOk;
}

int cmd_eigvec(const RunConfig& c, std::ostream& out) {
    OutputFormat f = pick_format(c, {OutputFormat::csv, OutputFormat::json, OutputFormat::svg});
    std::size_t N = c.n.value_or(5000);
    require(N >= 10, "--n must be >= 10");
    cplx xi(c.xi_re, c.xi_im);
    SolutionTail t = eigenvector_at(xi, N);
    if (f == OutputFormat::json) {
        Json re = Json::array(), im = Json::array();
        for (const cplx& z : t.values) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        emit_json(out, Json{{"xi_re", c.xi_re},
                            {"xi_im", c.xi_im},
                            {"N", N},
                            {"bound_constant", t.bound_constant},
                            {"bound_index", t.bound_index},
                            {"partial_l2", t.partial_l2.back()},
                            {"re", re},
                            {"im", im}});
    } else if (f == OutputFormat::svg) {
        SvgSeries s{"|u_n| sqrt(n) ln n", {}};
        for (std::size_t i = 1; i < t.values.size(); ++i) {
            double n = double(i + 1);
            s.points.emplace_back(n, std::abs(t.values[i]) * std::sqrt(n) * std::log(n));
        }
        write_svg(out, "eigenvector at xi = " + format_double(c.xi_re) + " + " + format_double(c.xi_im) + "i",
                  "n", "|u_n| sqrt(n) ln n", {s});
    } else {
        CsvTable tab{{"n", "re", "im", "abs", "partial_l2"}, {}};
        for (std::size_t i = 0; i < t.values.size(); ++i)
            tab.add_row({std::to_string(i + 1), format_double(t.values[i].real()), format_double(t.values[i].imag()),
                         format_double(std::abs(t.values[i])), format_double(t.partial_l2[i])});
        tab.write(out);
    }
    return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    pick_format(c, {OutputFormat::json});
    std::vector<InvariantCheck> checks = run_invariant_suite();
    Json list = Json::array();
    bool all = true;
    for (const InvariantCheck& k : checks) {
        all = all && k.passed;
        list.push_back(Json{{"module", k.module},
                            {"name", k.name},
                            {"pass", k.passed},
                            {"measured", k.measured},
                            {"threshold", k.threshold},
                            {"detail", k.detail}});
        if (!k.passed) write_error(err, "invariant_failed", k.module + ": " + k.name);
    }
    emit_json(out, list);
    return all ? kExitOk : kExitFailure;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require(c.tol > 0.0, "--tol must be positive");
    if (c.subcommand == "spectrum") return cmd_spectrum(c, out);
    if (c.subcommand == "sigma0") return cmd_sigma0(c, out);
    if (c.subcommand == "kernel-apply") return cmd_kernel_apply(c, out);
    if (c.subcommand == "inverse-check") return cmd_inverse_check(c, out);
    if (c.subcommand == "deficiency") return cmd_deficiency(c, out);
    if (c.subcommand == "polys") return cmd_polys(c, out);
    if (c.subcommand == "eigvec") return cmd_eigvec(c, out);
    if (c.subcommand == "verify") return cmd_verify(c, out, err);
    throw InvalidInput("unknown subcommand " + c.subcommand);
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    // Render fully before writing so a failed run leaves no partial output file.
    std::ostringstream buffer;
    int code = kExitOk;
    try {
        code = dispatch(config, buffer, err);
    } catch (const InvalidInput& e) {
        write_error(err, e.code(), e.what());
        return kExitInvalid;
    } catch (const Error& e) {
        write_error(err, e.code(), e.what());
        return kExitFailure;
    } catch (const std::exception& e) {
        write_error(err, "internal_error", e.what());
        return kExitFailure;
    }
    if (config.output.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(config.output, std::ios::binary);
        if (!file) {
            write_error(err, "invalid_input", "cannot open output file " + config.output);
            return kExitInvalid;
        }
        file << buffer.str();
    }
    return code;
}

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra, recurrences, right inverse and deficiency tests for the Gribov operator family"};
    app.name("gribov");
    app.require_subcommand(1, 1);

    RunConfig c;
    std::string format, mu_list;

    auto add_format = [&](CLI::App* s) {
        s->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "svg"}));
        s->add_option("--output", c.output, "Output file (default: standard output)");
    };
    auto add_n = [&](CLI::App* s, const std::string& what) { s->add_option("--n", c.n, what); };

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the n x n truncation");
    spectrum->add_option("--mu", c.mu, "Diagonal coefficient mu");
    spectrum->add_option("--lambda", c.lambda, "Coupling lambda");
    add_n(spectrum, "Truncation size (default 16)");
    spectrum->add_option("--tol", c.tol, "Root residual tolerance");
    add_format(spectrum);

    auto* sigma0 = app.add_subcommand("sigma0", "Bottom of the real spectrum, matrix against Nystrom");
    sigma0->add_option("--mu", mu_list, "Comma-separated mu values (default 0.5,1,2,4)");
    sigma0->add_option("--lambda", c.lambda, "Coupling lambda");
    sigma0->add_option("--method", c.method, "matrix, nystrom or both")
        ->check(CLI::IsMember({"matrix", "nystrom", "both"}));
    add_n(sigma0, "Matrix truncation size (default 1024)");
    sigma0->add_option("--L", c.L, "Nystrom cut-off");
    sigma0->add_option("--nodes", c.nodes, "Nystrom node count");
    sigma0->add_option("--tol", c.tol, "Root residual tolerance");
    add_format(sigma0);

    auto* kernel = app.add_subcommand("kernel-apply", "Apply the integral right inverse by quadrature");
    kernel->add_option("--mu", c.mu, "mu (default 0)");
    kernel->add_option("--lambda", c.lambda, "Coupling lambda");
    kernel->add_option("--input", c.input, "u-basis coefficient vector (JSON)")->required();
    kernel->add_option("--ymax", c.ymax, "Right end of the sample grid");
    kernel->add_option("--samples", c.samples, "Number of equally spaced samples from 0");
    kernel->add_option("--L", c.L, "Cut-off of the s integral");
    add_format(kernel);

    auto* inverse = app.add_subcommand("inverse-check", "max_n ||H K u_n - u_n|| / ||u_n|| over 2..nmax");
    inverse->add_option("--lambda", c.lambda, "Coupling lambda");
    inverse->add_option("--nmax", c.nmax, "Largest index checked");
    add_format(inverse);

    auto* deficiency = app.add_subcommand("deficiency", "Complete indeterminacy test for H^{p,m}");
    deficiency->add_option("--p", c.p, "Vanishing order p");
    deficiency->add_option("--m", c.m, "Step m");
    deficiency->add_option("--jmax", c.jmax, "Number of blocks");
    add_format(deficiency);

    auto* polys = app.add_subcommand("polys", "Orthogonal and integer polynomial families");
    polys->add_option("--kind", c.kind, "first, second, kouba_P, kouba_Q, plasma_P, plasma_Q");
    add_n(polys, "Index (default 5)");
    polys->add_option("--x", c.x_re, "Evaluation point, real part (first/second kind)");
    polys->add_option("--x-im", c.x_im, "Evaluation point, imaginary part");
    add_format(polys);

    auto* eigvec = app.add_subcommand("eigvec", "Formal eigenvector of the Jacobi-Gribov matrix at xi");
    eigvec->add_option("--xi-re", c.xi_re, "Real part of xi");
    eigvec->add_option("--xi-im", c.xi_im, "Imaginary part of xi");
    add_n(eigvec, "Number of entries (default 5000)");
    add_format(eigvec);

    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    add_format(verify);

    ParseOutcome outcome;
    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        outcome.exit_code = app.exit(e, out, err);
        return outcome;
    } catch (const CLI::CallForAllHelp& e) {
        outcome.exit_code = app.exit(e, out, err);
        return outcome;
    } catch (const CLI::ParseError& e) {
        write_error(err, "invalid_input", e.what());
        outcome.exit_code = kExitInvalid;
        return outcome;
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    if (c.subcommand == "kernel-apply" && kernel->count("--mu") == 0) c.mu = 0.0;
    try {
        if (!mu_list.empty()) c.mu_list = parse_number_list(mu_list);
    } catch (const InvalidInput& e) {
        write_error(err, e.code(), e.what());
        outcome.exit_code = kExitInvalid;
        return outcome;
    }
    if (format == "json") c.format = OutputFormat::json;
    if (format == "csv") c.format = OutputFormat::csv;
    if (format == "svg") c.format = OutputFormat::svg;
    outcome.config = std::move(c);
    return outcome;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    ParseOutcome parsed = parse_args(argc, argv, out, err);
    if (!parsed.config) return parsed.exit_code;
    return run(*parsed.config, out, err);
}

} // namespace gribov
