// cnpf: command-line driver for the factorization library.
//
// Subcommands: kernel | factorize | sarason | dirichlet | carleson.
// Each reads a JSON config (--config), runs the requested computations and
// verification checks, prints a JSON report to stdout and (with --out) writes
// the report plus CSV/JSON artifacts into a directory.  Exit code: 0 when all
// requested verdicts pass, 1 when a check fails, 2 on usage/config errors.
// Outputs are byte-identical across runs for a fixed config and seed; timing
// goes to stderr only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cnpf/common.hpp"
#include "cnpf/dirichlet.hpp"
#include "cnpf/io.hpp"
#include "cnpf/kernel.hpp"
#include "cnpf/multiindex.hpp"
#include "cnpf/psd.hpp"
#include "cnpf/quadrature.hpp"
#include "cnpf/rng.hpp"
#include "cnpf/sarason.hpp"
#include "cnpf/series.hpp"

namespace fs = std::filesystem;
using cnpf::Complex;
using cnpf::Real;
using cnpf::io::json;

namespace {

// ---- config access ----------------------------------------------------------

const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw cnpf::ConfigParse(std::string("missing required key '") + key + "'");
    return *it;
}

std::uint64_t seed_of(const json& cfg) { return cfg.value("seed", std::uint64_t{0}); }

// ---- report accumulation ----------------------------------------------------

class Runner {
public:
    Runner(std::string command, json cfg, std::string out_dir)
        : command_(std::move(command)), cfg_(std::move(cfg)), out_dir_(std::move(out_dir)) {}

    const json& cfg() const { return cfg_; }

    /// Runs fn(detail) -> pass; library errors inside a check mark it failed
    /// instead of aborting the run.
    template <typename Fn>
    void check(const std::string& name, Fn&& fn) {
        json detail = json::object();
        bool pass = false;
        try {
            pass = fn(detail);
        } catch (const cnpf::Error& e) {
            detail["error"] = e.what();
        }
        detail["name"] = name;
        detail["pass"] = pass;
        checks_.push_back(std::move(detail));
        all_pass_ = all_pass_ && pass;
    }

    void info(const std::string& key, json value) { extras_[key] = std::move(value); }
    void csv(const std::string& filename, cnpf::io::CsvTable table) {
        csvs_.emplace_back(filename, std::move(table));
    }
    void artifact(const std::string& filename, json doc) {
        artifacts_.emplace_back(filename, std::move(doc));
    }

    int finish() {
        json report;
        report["command"] = command_;
        report["pass"] = all_pass_;
        report["checks"] = checks_;
        report["config"] = cfg_;
        for (auto& [k, v] : extras_.items()) report[k] = v;
        std::cout << cnpf::io::dump_json(report);
        if (!out_dir_.empty()) {
            fs::create_directories(out_dir_);
            cnpf::io::save_json(report, (fs::path(out_dir_) / "report.json").string());
            for (auto& [name, doc] : artifacts_)
                cnpf::io::save_json(doc, (fs::path(out_dir_) / name).string());
            for (auto& [name, table] : csvs_) table.save((fs::path(out_dir_) / name).string());
        }
        return all_pass_ ? 0 : 1;
    }

private:
    std::string command_;
    json cfg_;
    std::string out_dir_;
    json checks_ = json::array();
    json extras_ = json::object();
    std::vector<std::pair<std::string, json>> artifacts_;
    std::vector<std::pair<std::string, cnpf::io::CsvTable>> csvs_;
    bool all_pass_ = true;
};

// ---- function construction ----------------------------------------------------

cnpf::VectorSeries preset_function(const std::string& name, const cnpf::KernelSpec& k) {
    const int d = cnpf::kernel_dim(k);
    auto want_dim = [&](int expect) {
        if (d != expect)
            throw cnpf::ConfigParse("preset '" + name + "' needs a dim-" +
                                    std::to_string(expect) + " space");
    };
    if (name == "h2-half-one-plus-z") {
        want_dim(1);
        cnpf::Series f(1, 1);
        const Real c = 1.0 / std::sqrt(2.0);
        f[0] = c;
        f[1] = c;
        return cnpf::VectorSeries({f});
    }
    if (name == "one") return cnpf::VectorSeries({cnpf::Series::constant(d, Complex(1, 0))});
    if (name == "z") {
        want_dim(1);
        return cnpf::VectorSeries(
            {cnpf::Series::monomial(1, cnpf::MultiIndex{{1, 0, 0}}, Complex(1, 0))});
    }
    if (name == "ball-z1") {
        if (d < 2) throw cnpf::ConfigParse("preset 'ball-z1' needs dim >= 2");
        return cnpf::VectorSeries(
            {cnpf::Series::monomial(d, cnpf::MultiIndex{{1, 0, 0}}, Complex(1, 0))});
    }
    throw cnpf::ConfigParse("unknown function preset '" + name + "'");
}

cnpf::VectorSeries random_unit_function(const cnpf::KernelSpec& k, int rows, int degree,
                                        std::uint64_t seed) {
    if (rows < 1 || degree < 0) throw cnpf::ConfigParse("random function: rows >= 1, degree >= 0");
    const int d = cnpf::kernel_dim(k);
    const std::vector<Real> nsq = cnpf::monomial_norms_sq(k, degree);
    cnpf::Xoshiro256 rng(seed);
    cnpf::VectorSeries F(rows, d, degree);
    for (int r = 0; r < rows; ++r)
        for (std::size_t g = 0; g < F.comp(r).size(); ++g)
            F.comp(r)[g] = rng.next_complex_normal() / std::sqrt(nsq[g]);
    const Real scale = 1.0 / std::sqrt(cnpf::weighted_norm_sq(F, nsq));
    for (int r = 0; r < rows; ++r) F.comp(r) *= Complex(scale, 0);
    return F;
}

cnpf::VectorSeries function_from_config(const json& fn, const cnpf::KernelSpec& k,
                                        std::uint64_t seed) {
    if (fn.contains("preset")) return preset_function(fn.at("preset").get<std::string>(), k);
    if (fn.contains("random")) {
        const json& r = fn.at("random");
        return random_unit_function(k, r.value("rows", 1), r.value("degree", 30),
                                    r.value("seed", seed));
    }
    if (fn.contains("components")) return cnpf::io::vector_series_from_json(fn);
    throw cnpf::ConfigParse("'function' must carry 'preset', 'random', or 'components'");
}

/// Series from either explicit coefficients or a rational form
/// {"numerator": [a0, a1, ...], "denominator": [b0, ...]} expanded through
/// `order` (exact division, so rational expectations stay lossless in JSON).
cnpf::Series expected_series(const json& j, int dim, int order) {
    if (j.contains("numerator")) {
        auto poly = [&](const json& arr) {
            cnpf::Series p(dim, order);
            int i = 0;
            for (const auto& c : arr) p[static_cast<std::size_t>(i++)] = cnpf::io::complex_from_json(c);
            return p;
        };
        cnpf::Series num = poly(j.at("numerator"));
        if (!j.contains("denominator")) return num;
        return cnpf::Series::mul(num, poly(j.at("denominator")).reciprocal(order), order);
    }
    return cnpf::io::series_from_json(j).truncated(order);
}

Real series_dev(const cnpf::Series& f, const cnpf::Series& g) {
    const int n = std::max(f.order(), g.order());
    return (f.truncated(n) - g.truncated(n)).max_abs();
}

// ---- grids --------------------------------------------------------------------

std::vector<std::vector<Complex>> grid_from_config(const cnpf::KernelSpec& spec, const json& g,
                                                   std::uint64_t seed) {
    const Real radius = g.value("radius", 0.9);
    if (!(radius > 0) || radius >= 1) throw cnpf::ConfigParse("grid radius must be in (0, 1)");
    if (g.contains("count"))
        return cnpf::sample_domain_points(spec, g.at("count").get<int>(),
                                          g.value("seed", seed), radius);
    const int nr = g.value("radial", 16);
    const int na = g.value("angular", 32);
    if (nr <= 0 || na <= 0) throw cnpf::ConfigParse("grid node counts must be positive");
    if (cnpf::kernel_dim(spec) == 1) {
        std::vector<std::vector<Complex>> pts;
        pts.reserve(static_cast<std::size_t>(nr) * static_cast<std::size_t>(na));
        for (int i = 0; i < nr; ++i) {
            const Real r = radius * static_cast<Real>(i + 1) / static_cast<Real>(nr);
            for (int j = 0; j < na; ++j) {
                const Real th = 2.0 * 3.14159265358979323846 * static_cast<Real>(j) /
                                static_cast<Real>(na);
                pts.push_back({std::polar(r, th)});
            }
        }
        return pts;
    }
    return cnpf::sample_domain_points(spec, nr * na, g.value("seed", seed), radius);
}

void point_columns(cnpf::io::CsvTable& t, int dim) {
    if (dim == 1) {
        t.header.push_back("re_z");
        t.header.push_back("im_z");
        return;
    }
    for (int c = 0; c < dim; ++c) {
        t.header.push_back("re_z" + std::to_string(c + 1));
        t.header.push_back("im_z" + std::to_string(c + 1));
    }
}

void point_cells(std::vector<std::string>& row, const std::vector<Complex>& z) {
    for (const Complex& c : z) {
        row.push_back(cnpf::io::format_real(c.real()));
        row.push_back(cnpf::io::format_real(c.imag()));
    }
}

std::optional<std::vector<Complex>> embed_from(const std::vector<double>& flag_flat,
                                               const json& cfg) {
    if (!flag_flat.empty()) {
        if (flag_flat.size() % 2 != 0)
            throw cnpf::ConfigParse("--embed expects re/im pairs (an even count of numbers)");
        std::vector<Complex> w;
        for (std::size_t i = 0; i + 1 < flag_flat.size(); i += 2)
            w.emplace_back(flag_flat[i], flag_flat[i + 1]);
        return w;
    }
    if (cfg.contains("embed_w")) {
        std::vector<Complex> w;
        for (const auto& c : cfg.at("embed_w")) w.push_back(cnpf::io::complex_from_json(c));
        return w;
    }
    return std::nullopt;
}

// ---- subcommands ----------------------------------------------------------------

int cmd_kernel(Runner& R) {
    const json& cfg = R.cfg();
    cnpf::KernelSpec spec = cnpf::io::kernel_spec_from_json(need(cfg, "kernel"));
    cnpf::validate(spec);
    const std::uint64_t seed = seed_of(cfg);
    R.info("kernel", cnpf::io::to_json(spec));

    R.check("coefficients", [&](json& d) {
        const int n = cfg.value("order", 16);
        const std::vector<Real> c = cnpf::diagonal_coeffs(spec, std::min(n, 16));
        d["dim"] = cnpf::kernel_dim(spec);
        d["first_coeffs"] = json(c);
        return std::all_of(c.begin(), c.end(), [](Real v) { return v > 0; });
    });

    R.check("cnp_row", [&](json& d) {
        const int n = cfg.value("cnp_order", 200);
        const cnpf::CnpRow row = cnpf::cnp_row_function(spec, n, cfg.value("cnp_tol", 1e-12));
        Real min_b = 0;
        for (Real b : row.b) min_b = std::min(min_b, b);
        d["order"] = n;
        d["cnp"] = row.cnp;
        d["first_negative"] = row.first_negative;
        d["min_b"] = min_b;
        if (cfg.contains("expect_cnp")) return row.cnp == cfg.at("expect_cnp").get<bool>();
        return true;
    });

    const auto pts = cnpf::sample_domain_points(spec, cfg.value("points", 10), seed,
                                                cfg.value("radius", 0.8));
    R.check("gram_psd", [&](json& d) {
        const cnpf::PsdReport rep = cnpf::psd_check(cnpf::gram_matrix(spec, pts));
        d["report"] = cnpf::io::to_json(rep);
        return rep.pass;
    });

    if (cfg.value("expect_cnp", false)) {
        R.check("projection_identity", [&](json& d) {
            const int def = cnpf::kernel_dim(spec) == 1 ? 40 : 10;
            const auto rep = cnpf::projection_identity_check(spec, cfg.value("projection_order", def));
            d["max_rel_dev"] = rep.max_rel_dev;
            d["tol"] = rep.tol;
            return rep.pass;
        });
    }

    if (cfg.contains("factor")) {
        cnpf::KernelSpec s = cnpf::io::kernel_spec_from_json(cfg.at("factor"));
        cnpf::validate(s);
        R.check("quotient_psd", [&](json& d) {
            const cnpf::QuotientReport q =
                cnpf::quotient_kernel_psd(spec, s, pts, cfg.value("profile_order", 64));
            d["section"] = cnpf::io::to_json(q.section);
            d["profile_checked"] = q.profile_checked;
            d["profile_nonneg"] = q.profile_nonneg;
            d["first_negative"] = q.first_negative;
            return q.pass;
        });
    }
    return R.finish();
}

int cmd_factorize(Runner& R, const std::vector<double>& embed_flag) {
    const json& cfg = R.cfg();
    const json& space = need(cfg, "space");
    cnpf::KernelSpec k = cnpf::io::kernel_spec_from_json(need(space, "k"));
    cnpf::KernelSpec s = cnpf::io::kernel_spec_from_json(need(space, "s"));
    cnpf::validate(k);
    cnpf::validate(s);
    const std::uint64_t seed = seed_of(cfg);
    const cnpf::VectorSeries F = function_from_config(need(cfg, "function"), k, seed);

    Complex a(1, 0);
    if (cfg.contains("a")) a = cnpf::io::complex_from_json(cfg.at("a"));
    if (!(a.real() > 0)) throw cnpf::ConfigParse("'a' must have positive real part");

    const int order = cfg.value("order", -1);
    const auto embed = embed_from(embed_flag, cfg);
    const cnpf::Factorization fac = cfg.value("unit", false)
                                        ? cnpf::factorize_unit(F, k, s, order, embed)
                                        : cnpf::factorize(F, a, k, s, order, embed);
    R.info("factorization", cnpf::io::to_json(fac));
    R.artifact("factorization.json", cnpf::io::to_json(fac));

    R.check("reconstruction", [&](json& d) {
        const Real tol = cfg.value("reconstruction_tol", 1e-8);
        d["residual"] = fac.reconstruction_residual;
        d["tol"] = tol;
        return fac.reconstruction_residual <= tol;
    });

    R.check("contractivity", [&](json& d) {
        const auto rep = cnpf::contractivity_check(fac, s, k, cfg.value("trials", 100), seed,
                                                   cfg.value("h_degree", 20),
                                                   cfg.value("contractivity_tol", 1e-6));
        d["min_slack"] = rep.min_slack;
        d["worst_trial"] = rep.worst_trial;
        d["trials"] = rep.trials;
        d["h_degree"] = rep.h_degree;
        return rep.pass;
    });

    if (!fac.embedded && cfg.value("uniqueness", true)) {
        R.check("uniqueness", [&](json& d) {
            const auto pts = cnpf::sample_domain_points(k, cfg.value("points", 10), seed + 1,
                                                        cfg.value("radius", 0.8));
            const auto rep = cnpf::uniqueness_kernel_psd(k, s, F, fac.psi, pts,
                                                         cfg.value("uniqueness_tol", 1e-10));
            d["psd"] = cnpf::io::to_json(rep.psd);
            d["max_l_z0"] = rep.max_l_z0;
            d["max_recovery_dev"] = rep.max_recovery_dev;
            return rep.pass;
        });
    }

    if (cfg.contains("expect")) {
        R.check("expected_factors", [&](json& d) {
            const json& e = cfg.at("expect");
            const Real tol = e.value("tol", 1e-10);
            Real worst = 0;
            if (e.contains("psi"))
                worst = std::max(worst, series_dev(fac.psi, expected_series(e.at("psi"), fac.psi.dim(),
                                                                            fac.psi.order())));
            if (e.contains("phi")) {
                const json& rows = e.at("phi");
                if (static_cast<int>(rows.size()) > fac.phi.rows())
                    throw cnpf::ConfigParse("expect.phi has more rows than the factorization");
                for (int r = 0; r < static_cast<int>(rows.size()); ++r)
                    worst = std::max(worst,
                                     series_dev(fac.phi.comp(r),
                                                expected_series(rows[static_cast<std::size_t>(r)],
                                                                fac.phi.dim(), fac.phi.order())));
            }
            d["max_coeff_dev"] = worst;
            d["tol"] = tol;
            return worst <= tol;
        });
    }

    if (cfg.contains("r_approx")) {
        R.check("r_approximant", [&](json& d) {
            const json& rc = cfg.at("r_approx");
            const Real r = need(rc, "r").get<Real>();
            if (!(r >= 0) || r >= 1) throw cnpf::ConfigParse("r_approx.r must be in [0, 1)");
            const auto rep = cnpf::r_approximant(fac, r, s, k, rc.value("trials", 20), seed + 2, &F,
                                                 rc.value("tol", 1e-8));
            d["r"] = r;
            d["min_slack"] = rep.min_slack;
            d["distance_to_f"] = rep.distance_to_f;
            return rep.pass;
        });
    }
    return R.finish();
}

int cmd_sarason(Runner& R) {
    const json& cfg = R.cfg();
    const json& space = need(cfg, "space");
    cnpf::KernelSpec k = cnpf::io::kernel_spec_from_json(need(space, "k"));
    cnpf::KernelSpec s = cnpf::io::kernel_spec_from_json(need(space, "s"));
    cnpf::validate(k);
    cnpf::validate(s);
    const std::uint64_t seed = seed_of(cfg);
    const cnpf::VectorSeries F = function_from_config(need(cfg, "function"), k, seed);

    const cnpf::SarasonData sd = cnpf::sarason_function(k, s, F);
    R.info("norm_sq", sd.norm_sq);
    R.info("v_coeffs", cnpf::io::to_json(sd.v));

    const auto grid = grid_from_config(k, cfg.value("grid", json::object()), seed);
    {
        cnpf::io::CsvTable t;
        point_columns(t, cnpf::kernel_dim(k));
        t.header.push_back("re_v");
        t.header.push_back("im_v");
        for (const auto& z : grid) {
            const Complex v = sd.v.eval(z);
            std::vector<std::string> row;
            point_cells(row, z);
            row.push_back(cnpf::io::format_real(v.real()));
            row.push_back(cnpf::io::format_real(v.imag()));
            t.add_row(std::move(row));
        }
        R.csv("sarason_grid.csv", std::move(t));
    }

    R.check("oracle_agreement", [&](json& d) {
        const int m = cfg.value("oracle_points", 20);
        const Real tol = cfg.value("oracle_tol", 1e-10);
        const auto pts = cnpf::sample_domain_points(k, m, seed + 2, cfg.value("radius", 0.9));
        Real worst = 0;
        for (const auto& z : pts) {
            const Complex o = cnpf::sarason_oracle_value(k, s, F, z);
            const Real dev = std::abs(sd.v.eval(z) - o) / std::max(Real(1), std::abs(o));
            worst = std::max(worst, dev);
        }
        d["points"] = m;
        d["max_rel_dev"] = worst;
        d["tol"] = tol;
        return worst <= tol;
    });

    R.check("majorant", [&](json& d) {
        const Real tol = cfg.value("majorant_tol", 1e-8);
        const auto rows = cnpf::majorant_check(k, s, F, grid, tol);
        cnpf::io::CsvTable t;
        point_columns(t, cnpf::kernel_dim(k));
        t.header.push_back("lhs");
        t.header.push_back("mid");
        t.header.push_back("rhs");
        t.header.push_back("verdict");
        bool all = true;
        Real worst = -std::numeric_limits<Real>::infinity();
        for (const auto& r : rows) {
            std::vector<std::string> cells;
            point_cells(cells, r.z);
            cells.push_back(cnpf::io::format_real(r.lhs));
            cells.push_back(cnpf::io::format_real(r.middle));
            cells.push_back(cnpf::io::format_real(r.rhs));
            cells.push_back(r.pass ? "pass" : "fail");
            t.add_row(std::move(cells));
            all = all && r.pass;
            worst = std::max(worst, r.lhs - r.rhs);
        }
        R.csv("majorant.csv", std::move(t));
        d["points"] = rows.size();
        d["max_lhs_minus_rhs"] = worst;
        d["tol"] = tol;
        return all;
    });

    R.check("main_lemma_psd", [&](json& d) {
        const auto pts = cnpf::sample_domain_points(k, cfg.value("points", 12), seed + 3,
                                                    cfg.value("radius", 0.8));
        const auto rep = cnpf::main_lemma_psd(k, s, F, pts, cfg.value("psd_tol", 1e-10));
        d["report"] = cnpf::io::to_json(rep);
        return rep.pass;
    });

    if (cfg.contains("quadrature")) {
        R.check("quadrature_agreement", [&](json& d) {
            const json& q = cfg.at("quadrature");
            const Real tol = q.value("tol", 1e-6);
            const auto pts = cnpf::sample_domain_points(k, q.value("points", 50), seed + 4,
                                                        q.value("radius", 0.8));
            const auto vals = cnpf::sarason_by_quadrature(k, F, pts, q.value("radial_nodes", 48),
                                                          q.value("angular_nodes", 128));
            Real worst = 0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const Complex c = sd.v.eval(pts[i]);
                worst = std::max(worst,
                                 std::abs(vals[i] - c) / std::max(Real(1), std::abs(c)));
            }
            d["points"] = pts.size();
            d["max_rel_dev"] = worst;
            d["tol"] = tol;
            return worst <= tol;
        });
    }

    if (cfg.value("extremal", false)) {
        R.check("extremal", [&](json& d) {
            const Real tol = cfg.value("extremal_tol", 1e-8);
            const auto rep = cnpf::extremal_check(k, F, cfg.value("extremal_degree", 16), tol);
            const Real vdev = series_dev(sd.v, cnpf::Series::constant(sd.v.dim(), Complex(1, 0)));
            const auto rows = cnpf::extremal_bound_check(k, s, F, grid, tol);
            const bool bounds =
                std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
            d["max_deviation"] = rep.max_deviation;
            d["v_minus_one"] = vdev;
            d["bounds_hold"] = bounds;
            d["tol"] = tol;
            return rep.extremal && vdev <= tol && bounds;
        });
    }

    if (cfg.contains("diff_op")) {
        const json& dc = cfg.at("diff_op");
        const auto row = cnpf::diff_op_experiment_row(k, s, F, dc.value("degree", 12),
                                                      dc.value("grid_points", 64), seed + 5,
                                                      dc.value("radius", 0.8));
        R.info("diff_op",
               json{{"sup_re_v", row.sup_re_v}, {"mult_lower_bound", row.mult_lower_bound}});
    }
    return R.finish();
}

int cmd_dirichlet(Runner& R) {
    const json& cfg = R.cfg();
    const Real alpha = cfg.value("alpha", 0.5);
    const std::uint64_t seed = seed_of(cfg);

    R.check("coefficient_band", [&](json& d) {
        const auto dk = cnpf::dalpha_coeffs(alpha, cfg.value("order", 400));
        d["band_lo"] = dk.band_lo;
        d["band_hi"] = dk.band_hi;
        d["limit"] = 1.0 / std::tgamma(1.0 + alpha);
        d["c1"] = dk.coeffs[1];
        const bool banded = dk.band_lo > 0 && dk.band_hi < 4 * dk.band_lo;
        const bool c1_ok = std::abs(dk.coeffs[1] - (alpha + 1) / (alpha + 2)) < 1e-14;
        return banded && c1_ok;
    });

    R.check("cnp_row", [&](json& d) {
        const int n = cfg.value("cnp_order", 500);
        const auto row = cnpf::cnp_row_function(cnpf::KernelSpec::dirichlet_alpha(alpha), n,
                                                cfg.value("cnp_tol", 1e-12));
        Real min_b = 0;
        for (Real b : row.b) min_b = std::min(min_b, b);
        d["order"] = n;
        d["min_b"] = min_b;
        d["first_negative"] = row.first_negative;
        return row.cnp;
    });

    R.check("s1_properties", [&](json& d) {
        const auto p = cnpf::s1_properties_check(alpha, cfg.value("s1_grid", 48));
        d["min_re"] = p.min_re;
        d["ratio_lo"] = p.ratio_lo;
        d["ratio_hi"] = p.ratio_hi;
        d["deriv_ratio_lo"] = p.deriv_ratio_lo;
        d["deriv_ratio_hi"] = p.deriv_ratio_hi;
        d["eps_sector"] = p.eps_sector;
        d["delta_sector"] = p.delta_sector;
        d["sector_ok"] = p.sector_ok;
        return p.pass;
    });

    const cnpf::DiscMeasure mu = cnpf::mu_alpha(alpha, cfg.value("measure_radial", 256),
                                                cfg.value("measure_angular", 256));
    R.check("monomial_oracle", [&](json& d) {
        const int deg = cfg.value("oracle_degree", 30);
        const Real tol = cfg.value("oracle_tol", 1e-6);
        const auto dk = cnpf::dalpha_coeffs(alpha, deg);
        Real worst = 0;
        for (int n = 1; n <= deg; ++n) {
            const cnpf::Series zn =
                cnpf::Series::monomial(1, cnpf::MultiIndex{{n, 0, 0}}, Complex(1, 0));
            std::vector<Real> terms(mu.nodes.size());
            for (std::size_t i = 0; i < mu.nodes.size(); ++i)
                terms[i] = mu.weights[i] * cnpf::local_dirichlet(zn, mu.nodes[i]);
            const Real lhs = 1.0 + cnpf::pairwise_sum(terms);
            worst = std::max(worst, std::abs(lhs * dk.coeffs[static_cast<std::size_t>(n)] - 1.0));
        }
        d["degree"] = deg;
        d["max_rel_err"] = worst;
        d["tol"] = tol;
        return worst <= tol;
    });

    R.check("shimorin_agreement", [&](json& d) {
        const int m = cfg.value("shimorin_points", 20);
        const Real tol = cfg.value("shimorin_tol", 1e-5);
        const cnpf::Series f = cnpf::f_contractive(alpha, cfg.value("test_order", 24));
        const cnpf::KernelSpec da = cnpf::KernelSpec::dirichlet_alpha(alpha);
        const auto sd = cnpf::sarason_function(da, da, cnpf::VectorSeries({f}));
        const auto pts = cnpf::sample_domain_points(da, m, seed + 6, cfg.value("radius", 0.85));
        Real worst = 0;
        for (const auto& z : pts) {
            const Real coeff_route = sd.v.eval(z).real();
            const Real quad_route = cnpf::shimorin_re_v(alpha, f, z[0], mu);
            worst = std::max(worst, std::abs(coeff_route - quad_route) /
                                        std::max(Real(1), std::abs(coeff_route)));
        }
        d["points"] = m;
        d["max_rel_dev"] = worst;
        d["tol"] = tol;
        return worst <= tol;
    });

    if (cfg.contains("demo")) {
        R.check("unbounded_growth", [&](json& d) {
            const json& dc = cfg.at("demo");
            const auto demo = cnpf::unbounded_demo(alpha, dc.value("max_zeros", 12),
                                                   dc.value("series_order", 1 << 23));
            cnpf::io::CsvTable zt;
            zt.header = {"n", "z_n", "w_n", "t_n", "S_n"};
            for (const auto& row : demo.rows)
                zt.add_row({std::to_string(row.n), cnpf::io::format_real(row.z_n),
                            cnpf::io::format_real(row.w_n), cnpf::io::format_real(row.t_n),
                            cnpf::io::format_real(row.s_n)});
            R.csv("dirichlet_zeros.csv", std::move(zt));

            cnpf::io::CsvTable rt;
            rt.header = {"r", "rev_0"};
            for (std::size_t j = 0; j < demo.re_v_curves.size(); ++j)
                rt.header.push_back("rev_" + std::to_string(j + 1));
            for (std::size_t i = 0; i < demo.r_grid.size(); ++i) {
                std::vector<std::string> cells{cnpf::io::format_real(demo.r_grid[i]),
                                               cnpf::io::format_real(demo.baseline_re_v[i])};
                for (const auto& curve : demo.re_v_curves)
                    cells.push_back(cnpf::io::format_real(curve[i]));
                rt.add_row(std::move(cells));
            }
            R.csv("dirichlet_rev.csv", std::move(rt));

            json summary;
            summary["alpha"] = demo.alpha;
            summary["max_zeros"] = demo.max_zeros;
            summary["series_order"] = demo.series_order;
            summary["delta"] = demo.delta;
            summary["t_floor"] = demo.t_floor;
            summary["t_ok"] = demo.t_ok;
            summary["s_increasing"] = demo.s_increasing;
            summary["s_increment_ok"] = demo.s_increment_ok;
            summary["growth_ratio"] = demo.growth_ratio;
            summary["growth_increasing"] = demo.growth_increasing;
            summary["baseline_sup_re_v"] = demo.baseline_sup_re_v;
            summary["cross_check_rel_dev"] = demo.cross_check_rel_dev;
            summary["estimate_below_ratios"] = json(demo.estimate_below_ratios);
            summary["estimate_below_positive"] = demo.estimate_below_positive;
            json rows = json::array();
            for (const auto& row : demo.rows)
                rows.push_back(json{{"n", row.n},
                                    {"z_n", row.z_n},
                                    {"w_n", row.w_n},
                                    {"t_n", row.t_n},
                                    {"S_n", row.s_n},
                                    {"sup_re_v", row.sup_re_v},
                                    {"r_at_sup", row.r_at_sup}});
            summary["rows"] = rows;
            R.artifact("dirichlet_summary.json", summary);

            d["delta"] = demo.delta;
            d["t_floor"] = demo.t_floor;
            d["growth_ratio"] = demo.growth_ratio;
            d["cross_check_rel_dev"] = demo.cross_check_rel_dev;
            d["s_increasing"] = demo.s_increasing;
            d["estimate_below_positive"] = demo.estimate_below_positive;
            return demo.pass;
        });
    }
    return R.finish();
}

cnpf::DiscMeasure measure_from_config(const json& m) {
    const std::string type = need(m, "type").get<std::string>();
    if (type == "point_mass")
        return cnpf::point_mass(cnpf::io::complex_from_json(need(m, "at")), m.value("weight", 1.0));
    if (type == "area") {
        cnpf::DiscMeasure mu = cnpf::area_measure(m.value("radial", 64), m.value("angular", 64));
        const Real scale = m.value("scale", 1.0);
        for (Real& w : mu.weights) w *= scale;
        return mu;
    }
    if (type == "mu_alpha")
        return cnpf::mu_alpha(m.value("alpha", 0.5), m.value("radial", 256),
                              m.value("angular", 256));
    if (type == "points") {
        cnpf::DiscMeasure mu;
        for (const auto& c : need(m, "nodes")) mu.nodes.push_back(cnpf::io::complex_from_json(c));
        if (m.contains("weights")) {
            for (const auto& w : m.at("weights")) mu.weights.push_back(w.get<Real>());
        } else {
            mu.weights.assign(mu.nodes.size(), 1.0);
        }
        if (mu.weights.size() != mu.nodes.size())
            throw cnpf::ConfigParse("measure: nodes and weights differ in length");
        return mu;
    }
    throw cnpf::ConfigParse("unknown measure type '" + type + "'");
}

int cmd_carleson(Runner& R) {
    const json& cfg = R.cfg();
    cnpf::KernelSpec s = cnpf::io::kernel_spec_from_json(need(cfg, "kernel"));
    cnpf::validate(s);
    const cnpf::DiscMeasure mu = measure_from_config(need(cfg, "measure"));
    const std::uint64_t seed = seed_of(cfg);

    const auto rep = cnpf::carleson_check(s, mu, cfg.value("degree", 24), cfg.value("trials", 50),
                                          seed, cfg.value("grid_max_radius", 0.999),
                                          cfg.value("grid_angles", 64));
    R.info("measure_mass", mu.mass());
    R.check("embedding", [&](json& d) {
        d["sup_re"] = rep.sup_re;
        d["embedding_constant"] = rep.embedding_constant;
        d["sampled_max_ratio"] = rep.sampled_max_ratio;
        return rep.sampled_consistent;
    });

    if (cfg.contains("expect_constant")) {
        R.check("expected_constant", [&](json& d) {
            const json& e = cfg.at("expect_constant");
            const Real v = need(e, "value").get<Real>();
            const Real tol = e.value("rel_tol", 1e-6);
            const Real dev = std::abs(rep.embedding_constant - v) / std::max(Real(1), std::abs(v));
            d["value"] = rep.embedding_constant;
            d["expected"] = v;
            d["rel_dev"] = dev;
            d["rel_tol"] = tol;
            return dev <= tol;
        });
    }
    return R.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constructive factorization toolkit"};
    app.set_version_flag("--version", "0.1.0");
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::vector<double> embed_flat;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory for the report and artifacts");
        sub->add_option("--seed", seed, "seed override (takes precedence over the config)")
            ->each([&](const std::string&) { seed_given = true; });
        return sub;
    };

    CLI::App* c_kernel = add_common(app.add_subcommand("kernel", "diagonal kernel diagnostics"));
    CLI::App* c_fact = add_common(
        app.add_subcommand("factorize", "a-factorization with certificates"));
    c_fact->add_option("--embed", embed_flat,
                       "embedding point as re/im pairs (overrides config embed_w)");
    CLI::App* c_sar = add_common(
        app.add_subcommand("sarason", "Sarason-function grids and majorant checks"));
    CLI::App* c_dir = add_common(
        app.add_subcommand("dirichlet", "Dirichlet-type kernel and growth demonstration"));
    CLI::App* c_car = add_common(app.add_subcommand("carleson", "embedding constants"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int rc = 2;
    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config file '" << config_path << "'\n";
            return 2;
        }
        json cfg;
        try {
            cfg = json::parse(in);
        } catch (const json::exception& e) {
            throw cnpf::ConfigParse(e.what());
        }
        if (!cfg.is_object()) throw cnpf::ConfigParse("config root must be a JSON object");
        if (seed_given) cfg["seed"] = seed;

        if (c_kernel->parsed()) {
            Runner r("kernel", cfg, out_dir);
            rc = cmd_kernel(r);
        } else if (c_fact->parsed()) {
            Runner r("factorize", cfg, out_dir);
            rc = cmd_factorize(r, embed_flat);
        } else if (c_sar->parsed()) {
            Runner r("sarason", cfg, out_dir);
            rc = cmd_sarason(r);
        } else if (c_dir->parsed()) {
            Runner r("dirichlet", cfg, out_dir);
            rc = cmd_dirichlet(r);
        } else if (c_car->parsed()) {
            Runner r("carleson", cfg, out_dir);
            rc = cmd_carleson(r);
        }
    } catch (const cnpf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const auto t1 = std::chrono::steady_clock::now();
    std::cerr << "wall_ms="
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << "\n";
    return rc;
}
