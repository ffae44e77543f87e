#include "cnpf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace cnpf::io {

std::string format_real(Real x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_complex(Complex z) {
    if (z.imag() == 0.0) return format_real(z.real());
    std::string s = format_real(z.real());
    s += z.imag() < 0 ? "-" : "+";
    s += format_real(std::abs(z.imag()));
    s += "i";
    return s;
}

std::string CsvTable::str() const {
    std::string out;
    const auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

void CsvTable::save(const std::string& path) const { save_text(str(), path); }

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (j.is_number()) return Complex(j.get<Real>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<Real>(), j[1].get<Real>());
    throw ConfigParse("complex values must be numbers or [re, im] pairs");
}

json to_json(const KernelSpec& spec) {
    json j;
    j["family"] = family_name(spec.family);
    j["dim"] = spec.dim;
    switch (spec.family) {
        case KernelFamily::BergmanDiscWeighted:
            j["beta"] = spec.beta;
            break;
        case KernelFamily::DirichletAlpha:
            j["alpha"] = spec.alpha;
            break;
        case KernelFamily::PowerOf:
            j["power"] = spec.power;
            j["base"] = to_json(*spec.base);
            break;
        case KernelFamily::CustomDiagonal:
            j["profile"] = spec.custom;
            break;
        default:
            break;
    }
    return j;
}

KernelSpec kernel_spec_from_json(const json& j) {
    try {
        const std::string fam = j.at("family").get<std::string>();
        const int dim = j.value("dim", 1);
        KernelSpec spec;
        if (fam == "szego") {
            spec = KernelSpec::szego();
        } else if (fam == "drury_arveson") {
            spec = KernelSpec::drury_arveson(dim);
        } else if (fam == "bergman") {
            spec = KernelSpec::bergman(j.value("beta", 0.0));
        } else if (fam == "hardy_ball") {
            spec = KernelSpec::hardy_ball(dim);
        } else if (fam == "hardy_polydisc") {
            spec = KernelSpec::hardy_polydisc(dim);
        } else if (fam == "dirichlet_alpha") {
            spec = KernelSpec::dirichlet_alpha(j.at("alpha").get<Real>());
        } else if (fam == "custom") {
            spec = KernelSpec::custom_diagonal(j.at("profile").get<std::vector<Real>>());
            spec.dim = dim;
        } else if (fam == "power") {
            spec = KernelSpec::power_of(kernel_spec_from_json(j.at("base")),
                                        j.at("power").get<Real>());
        } else {
            throw ConfigParse("unknown kernel family: " + fam);
        }
        validate(spec);
        return spec;
    } catch (const json::exception& e) {
        throw ConfigParse(std::string("kernel spec: ") + e.what());
    }
}

json to_json(const Series& f) {
    json coeffs = json::array();
    for (std::size_t r = 0; r < f.size(); ++r) {
        const Complex c = f[r];
        if (c == Complex(0)) continue;
        coeffs.push_back(json::array({r, c.real(), c.imag()}));
    }
    json j;
    j["dim"] = f.dim();
    j["order"] = f.order();
    j["coeffs"] = std::move(coeffs);
    return j;
}

Series series_from_json(const json& j) {
    try {
        Series f(j.value("dim", 1), j.at("order").get<int>());
        for (const auto& t : j.at("coeffs")) {
            if (!t.is_array() || t.size() != 3)
                throw ConfigParse("series coefficients must be [rank, re, im] triples");
            const std::size_t rank = t[0].get<std::size_t>();
            if (rank >= f.size()) throw ConfigParse("series coefficient rank out of range");
            f[rank] = Complex(t[1].get<Real>(), t[2].get<Real>());
        }
        return f;
    } catch (const json::exception& e) {
        throw ConfigParse(std::string("series: ") + e.what());
    }
}

json to_json(const VectorSeries& F) {
    json comps = json::array();
    for (int i = 0; i < F.rows(); ++i) comps.push_back(to_json(F.comp(i)));
    return json{{"components", std::move(comps)}};
}

VectorSeries vector_series_from_json(const json& j) {
    try {
        std::vector<Series> comps;
        for (const auto& c : j.at("components")) comps.push_back(series_from_json(c));
        if (comps.empty()) throw ConfigParse("vector series needs at least one component");
        return VectorSeries(std::move(comps));
    } catch (const json::exception& e) {
        throw ConfigParse(std::string("vector series: ") + e.what());
    }
}

json to_json(const PsdReport& rep) {
    return json{{"n", rep.n},
                {"min_eig", rep.min_eig},
                {"max_eig", rep.max_eig},
                {"trace", rep.trace},
                {"herm_defect", rep.herm_defect},
                {"tol", rep.tol},
                {"pass", rep.pass}};
}

json to_json(const Factorization& fac) {
    json certificates{{"reconstruction_residual", fac.reconstruction_residual},
                      {"contractivity_margin", fac.contractivity_margin},
                      {"psi_at_base", to_json(fac.psi_at_base)},
                      {"embedded", fac.embedded},
                      {"base_rows", fac.base_rows},
                      {"truncated", fac.psi.truncation_flag()}};
    if (fac.embedded) {
        json w = json::array();
        for (Complex c : fac.embed_w) w.push_back(to_json(c));
        certificates["embed_w"] = std::move(w);
    }
    json phi = json::array();
    for (int i = 0; i < fac.phi.rows(); ++i) phi.push_back(to_json(fac.phi.comp(i)));
    return json{{"a", to_json(fac.a)},
                {"psi_coeffs", to_json(fac.psi)},
                {"phi_coeffs", std::move(phi)},
                {"certificates", std::move(certificates)}};
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void save_json(const json& j, const std::string& path) { save_text(dump_json(j), path); }

void save_text(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigParse("cannot open output file: " + path);
    out << text;
    if (!out) throw ConfigParse("failed writing output file: " + path);
}

}  // namespace cnpf::io
