// io.hpp — JSON model/band files and CSV result writers.
//
// Model file schema (complex numbers as [re, im] pairs):
// {
//   "dim": N, "omega": W,
//   "h_fourier": [ {"l": 0, "real_part": [[..]], "imag_part": [[..]]}, ... ],
//   "jumps": [ {"matrix": [[[re,im],..],..], "rate": g,
//               "harmonics": [ {"l": 1, "matrix": [[[re,im],..],..]} ] }, ... ]
// }
// ("harmonics" is optional; jumps are static without it.)
//
// Band file schema:
// {
//   "amplitude": [re, im], "omega": W, "gamma0": g0, "beta": B or "inf",
//   "k_points": [ {"k": x, "eps1": e1, "eps2": e2,
//                  "v0": [[[re,im],..],..], "dv_dk": [[[re,im],..],..]}, ... ]
// }
// (absent "beta" defaults to infinity, i.e. zero temperature)

#pragma once

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floq/common.hpp"
#include "floq/model.hpp"
#include "floq/optics.hpp"
#include "floq/sambe.hpp"
#include "floq/spectral.hpp"

namespace floq {

using nlohmann::json;

// Shortest round-trippable decimal representation.
inline std::string fmt_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace detail {

inline json matrix_to_pairs(const Matrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

inline Matrix matrix_from_pairs(const json& rows, const std::string& what)
{
    if (!rows.is_array() || rows.empty()) throw ParseError(what + ": expected a matrix");
    const std::size_t nr = rows.size();
    const std::size_t nc = rows[0].is_array() ? rows[0].size() : 0;
    if (nc == 0) throw ParseError(what + ": empty matrix row");
    Matrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        if (!rows[i].is_array() || rows[i].size() != nc) {
            throw ParseError(what + ": ragged matrix rows");
        }
        for (std::size_t j = 0; j < nc; ++j) {
            const json& cell = rows[i][j];
            if (!cell.is_array() || cell.size() != 2) {
                throw ParseError(what + ": complex entries must be [re, im] pairs");
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                Complex(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    return m;
}

inline json matrix_to_parts(const Matrix& m)
{
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rr = json::array(), ri = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return json{{"real_part", re}, {"imag_part", im}};
}

inline Matrix matrix_from_parts(const json& re, const json& im, const std::string& what)
{
    if (!re.is_array() || re.empty() || !re[0].is_array()) {
        throw ParseError(what + ": real_part must be a matrix");
    }
    const std::size_t nr = re.size();
    const std::size_t nc = re[0].size();
    if (im.size() != nr) throw ParseError(what + ": real_part/imag_part shape mismatch");
    Matrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        if (re[i].size() != nc || im[i].size() != nc) {
            throw ParseError(what + ": ragged matrix rows");
        }
        for (std::size_t j = 0; j < nc; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                Complex(re[i][j].get<double>(), im[i][j].get<double>());
        }
    }
    return m;
}

inline json parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace detail

inline json model_to_json(const LindbladModel& model)
{
    json j;
    j["dim"] = model.dim;
    j["omega"] = model.omega;
    json hf = json::array();
    for (const auto& [l, h] : model.h_fourier) {
        json entry = detail::matrix_to_parts(h);
        entry["l"] = l;
        hf.push_back(entry);
    }
    j["h_fourier"] = hf;
    json jumps = json::array();
    for (const auto& jump : model.jumps) {
        json entry;
        entry["matrix"] = detail::matrix_to_pairs(jump.op);
        entry["rate"] = jump.rate;
        if (!jump.op_harmonics.empty()) {
            json harm = json::array();
            for (const auto& [l, op] : jump.op_harmonics) {
                harm.push_back({{"l", l}, {"matrix", detail::matrix_to_pairs(op)}});
            }
            entry["harmonics"] = harm;
        }
        jumps.push_back(entry);
    }
    j["jumps"] = jumps;
    return j;
}

inline LindbladModel model_from_json(const json& j)
{
    try {
        LindbladModel model;
        model.dim = j.at("dim").get<int>();
        model.omega = j.at("omega").get<double>();
        for (const auto& entry : j.at("h_fourier")) {
            const int l = entry.at("l").get<int>();
            model.h_fourier[l] = detail::matrix_from_parts(entry.at("real_part"),
                                                           entry.at("imag_part"),
                                                           "h_fourier[" + std::to_string(l) + "]");
        }
        if (j.contains("jumps")) {
            for (const auto& entry : j.at("jumps")) {
                Jump jump;
                jump.op = detail::matrix_from_pairs(entry.at("matrix"), "jump matrix");
                jump.rate = entry.at("rate").get<double>();
                if (entry.contains("harmonics")) {
                    for (const auto& harm : entry.at("harmonics")) {
                        jump.op_harmonics[harm.at("l").get<int>()] =
                            detail::matrix_from_pairs(harm.at("matrix"), "jump harmonic");
                    }
                }
                model.jumps.push_back(std::move(jump));
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
}

inline LindbladModel read_model(const std::string& path)
{
    return model_from_json(detail::parse_file(path));
}

// Optional run configuration embedded in a model document; values act as
// defaults that explicit command-line flags override.
struct EmbeddedConfig {
    int slices = 0;       // 0 = not set
    int cutoff = -1;      // -1 = not set
    bool has_t0 = false;
    double t0 = 0.0;
    std::map<std::string, double> tolerances;
};

struct ModelFile {
    LindbladModel model;
    EmbeddedConfig config;
};

inline ModelFile read_model_file(const std::string& path)
{
    const json j = detail::parse_file(path);
    ModelFile file;
    file.model = model_from_json(j);
    if (j.contains("config")) {
        try {
            const json& c = j.at("config");
            if (c.contains("slices")) file.config.slices = c.at("slices").get<int>();
            if (c.contains("cutoff")) file.config.cutoff = c.at("cutoff").get<int>();
            if (c.contains("t0")) {
                file.config.t0 = c.at("t0").get<double>();
                file.config.has_t0 = true;
            }
            if (c.contains("tolerances")) {
                for (const auto& [key, value] : c.at("tolerances").items()) {
                    file.config.tolerances[key] = value.get<double>();
                }
            }
        } catch (const json::exception& e) {
            throw ParseError(path + ": embedded config: " + e.what());
        }
    }
    return file;
}

// Named tolerance overrides onto the spectral options.
inline SpectralOptions apply_tolerances(SpectralOptions opts,
                                        const std::map<std::string, double>& overrides)
{
    for (const auto& [key, value] : overrides) {
        if (key == "eps_modulus") {
            opts.eps_modulus = value;
        } else if (key == "eps_steady") {
            opts.eps_steady = value;
        } else if (key == "eps_trace") {
            opts.eps_trace = value;
        } else if (key == "cluster_tol") {
            opts.cluster_tol = value;
        } else if (key == "rank_tol") {
            opts.rank_tol = value;
        } else if (key == "psd_tol") {
            opts.psd_tol = value;
        } else if (key == "ness_residual_tol") {
            opts.ness_residual_tol = value;
        } else {
            throw ParseError("unknown tolerance override: " + key);
        }
    }
    return opts;
}

inline void write_model(const LindbladModel& model, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out << model_to_json(model).dump(2) << '\n';
}

inline json band_model_to_json(const TwoBandModel& model)
{
    json j;
    j["amplitude"] = {model.amplitude.real(), model.amplitude.imag()};
    j["omega"] = model.omega;
    j["gamma0"] = model.gamma0;
    if (model.beta == std::numeric_limits<double>::infinity()) {
        j["beta"] = "inf";
    } else {
        j["beta"] = model.beta;
    }
    json pts = json::array();
    for (const auto& kp : model.k_grid) {
        pts.push_back({{"k", kp.k},
                       {"eps1", kp.eps1},
                       {"eps2", kp.eps2},
                       {"v0", detail::matrix_to_pairs(kp.v0)},
                       {"dv_dk", detail::matrix_to_pairs(kp.dv_dk)}});
    }
    j["k_points"] = pts;
    return j;
}

struct BandModelFile {
    TwoBandModel model;
    bool beta_defaulted = false; // absent beta -> infinity (zero temperature)
};

inline BandModelFile band_model_from_json(const json& j)
{
    try {
        BandModelFile file;
        TwoBandModel& model = file.model;
        const json& amp = j.at("amplitude");
        model.amplitude = Complex(amp.at(0).get<double>(), amp.at(1).get<double>());
        model.omega = j.at("omega").get<double>();
        model.gamma0 = j.at("gamma0").get<double>();
        if (!j.contains("beta")) {
            model.beta = std::numeric_limits<double>::infinity();
            file.beta_defaulted = true;
        } else if (j.at("beta").is_string()) {
            if (j.at("beta").get<std::string>() != "inf") {
                throw ParseError("band file: beta must be a number or \"inf\"");
            }
            model.beta = std::numeric_limits<double>::infinity();
        } else {
            model.beta = j.at("beta").get<double>();
        }
        for (const auto& entry : j.at("k_points")) {
            KPoint kp;
            kp.k = entry.at("k").get<double>();
            kp.eps1 = entry.at("eps1").get<double>();
            kp.eps2 = entry.at("eps2").get<double>();
            kp.v0 = detail::matrix_from_pairs(entry.at("v0"), "v0");
            kp.dv_dk = detail::matrix_from_pairs(entry.at("dv_dk"), "dv_dk");
            model.k_grid.push_back(std::move(kp));
        }
        assign_uniform_weights(model);
        return file;
    } catch (const json::exception& e) {
        throw ParseError(std::string("band file: ") + e.what());
    }
}

inline BandModelFile read_band_model(const std::string& path)
{
    return band_model_from_json(detail::parse_file(path));
}

// ---- CSV writers ----

inline std::string spectrum_csv(const FloquetSpectrum& spec)
{
    std::ostringstream out;
    out << "re_q,im_q,modulus,class,trace_re,trace_im,cluster_id,algebraic_mult,geometric_mult\n";
    for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
        const Complex q = spec.eigenvalues(j);
        const Complex tr = spec.eigenoperators[static_cast<std::size_t>(j)].trace();
        const std::size_t cid = cluster_of(spec.jordan, static_cast<std::size_t>(j));
        const JordanCluster& cluster = spec.jordan.clusters[cid];
        out << fmt_double(q.real()) << ',' << fmt_double(q.imag()) << ','
            << fmt_double(std::abs(q)) << ',' << to_string(spec.classes[static_cast<std::size_t>(j)])
            << ',' << fmt_double(tr.real()) << ',' << fmt_double(tr.imag()) << ',' << cid << ','
            << cluster.algebraic << ',' << cluster.geometric << '\n';
    }
    return out.str();
}

inline json spectrum_to_json(const FloquetSpectrum& spec)
{
    json rows = json::array();
    for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
        const Complex q = spec.eigenvalues(j);
        const Complex tr = spec.eigenoperators[static_cast<std::size_t>(j)].trace();
        const std::size_t cid = cluster_of(spec.jordan, static_cast<std::size_t>(j));
        rows.push_back({{"re_q", q.real()},
                        {"im_q", q.imag()},
                        {"modulus", std::abs(q)},
                        {"class", to_string(spec.classes[static_cast<std::size_t>(j)])},
                        {"trace_re", tr.real()},
                        {"trace_im", tr.imag()},
                        {"cluster_id", cid},
                        {"algebraic_mult", spec.jordan.clusters[cid].algebraic},
                        {"geometric_mult", spec.jordan.clusters[cid].geometric}});
    }
    return json{{"eigenvalues", rows}};
}

inline std::string ness_csv(const Ness& ness)
{
    std::ostringstream out;
    out << "# fixed_point_residual=" << fmt_double(ness.fixed_point_residual)
        << " steady_dimension=" << ness.steady_dimension << '\n';
    out << "sample,t,i,j,re,im\n";
    const Eigen::Index n = ness.rho0.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out << "-1," << fmt_double(ness.trajectory.front().first) << ',' << i << ',' << j
                << ',' << fmt_double(ness.rho0(i, j).real()) << ','
                << fmt_double(ness.rho0(i, j).imag()) << '\n';
        }
    }
    for (std::size_t s = 0; s < ness.trajectory.size(); ++s) {
        const auto& [t, rho] = ness.trajectory[s];
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                out << s << ',' << fmt_double(t) << ',' << i << ',' << j << ','
                    << fmt_double(rho(i, j).real()) << ',' << fmt_double(rho(i, j).imag()) << '\n';
            }
        }
    }
    return out.str();
}

inline json ness_to_json(const Ness& ness)
{
    json j;
    j["fixed_point_residual"] = ness.fixed_point_residual;
    j["steady_dimension"] = ness.steady_dimension;
    j["rho0"] = detail::matrix_to_pairs(ness.rho0);
    json traj = json::array();
    for (const auto& [t, rho] : ness.trajectory) {
        traj.push_back({{"t", t}, {"rho", detail::matrix_to_pairs(rho)}});
    }
    j["trajectory"] = traj;
    return j;
}

inline std::string sambe_csv(const std::vector<SfEigenmode>& modes)
{
    std::ostringstream out;
    out << "re_lambda,im_lambda,edge_weight,converged\n";
    for (const auto& m : modes) {
        out << fmt_double(m.lambda.real()) << ',' << fmt_double(m.lambda.imag()) << ','
            << fmt_double(m.edge_weight) << ',' << (m.converged ? 1 : 0) << '\n';
    }
    return out.str();
}

inline json sambe_to_json(const std::vector<SfEigenmode>& modes)
{
    json rows = json::array();
    for (const auto& m : modes) {
        json blocks = json::array();
        for (const auto& [l, blk] : m.blocks) {
            blocks.push_back({{"l", l}, {"matrix", detail::matrix_to_pairs(blk)}});
        }
        rows.push_back({{"re_lambda", m.lambda.real()},
                        {"im_lambda", m.lambda.imag()},
                        {"edge_weight", m.edge_weight},
                        {"converged", m.converged},
                        {"blocks", blocks}});
    }
    return json{{"eigenmodes", rows}};
}

inline std::string optics_csv(const OpticalResponse& resp, bool with_linear = false,
                              bool beta_defaulted = false)
{
    std::ostringstream out;
    if (beta_defaulted) out << "# beta absent in input; default beta=inf (zero temperature) applied\n";
    out << "k,sigma_x,sigma_y,sigma_z,j_dc,re_j_shg,im_j_shg";
    if (with_linear) out << ",re_j_linear,im_j_linear";
    out << '\n';
    for (const auto& pk : resp.per_k) {
        out << fmt_double(pk.k) << ',' << fmt_double(pk.sigma_ss(0)) << ','
            << fmt_double(pk.sigma_ss(1)) << ',' << fmt_double(pk.sigma_ss(2)) << ','
            << fmt_double(pk.j_dc) << ',' << fmt_double(pk.j_shg.real()) << ','
            << fmt_double(pk.j_shg.imag());
        if (with_linear) {
            out << ',' << fmt_double(pk.j_linear.real()) << ',' << fmt_double(pk.j_linear.imag());
        }
        out << '\n';
    }
    out << "total,,,," << fmt_double(resp.total_dc) << ',' << fmt_double(resp.total_shg.real())
        << ',' << fmt_double(resp.total_shg.imag());
    if (with_linear) {
        out << ',' << fmt_double(resp.total_linear.real()) << ','
            << fmt_double(resp.total_linear.imag());
    }
    out << '\n';
    return out.str();
}

inline json optics_to_json(const OpticalResponse& resp, bool with_linear = false)
{
    json rows = json::array();
    for (const auto& pk : resp.per_k) {
        json row = {{"k", pk.k},
                    {"sigma_x", pk.sigma_ss(0)},
                    {"sigma_y", pk.sigma_ss(1)},
                    {"sigma_z", pk.sigma_ss(2)},
                    {"j_dc", pk.j_dc},
                    {"re_j_shg", pk.j_shg.real()},
                    {"im_j_shg", pk.j_shg.imag()}};
        if (with_linear) {
            row["re_j_linear"] = pk.j_linear.real();
            row["im_j_linear"] = pk.j_linear.imag();
        }
        rows.push_back(row);
    }
    json j{{"per_k", rows},
           {"total_dc", resp.total_dc},
           {"re_total_shg", resp.total_shg.real()},
           {"im_total_shg", resp.total_shg.imag()}};
    if (with_linear) {
        j["re_total_linear"] = resp.total_linear.real();
        j["im_total_linear"] = resp.total_linear.imag();
    }
    return j;
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << text;
}

} // namespace floq
