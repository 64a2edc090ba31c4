#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <sstream>

#include "floq/ensemble.hpp"
#include "floq/io.hpp"

using namespace floq;

namespace {

LindbladModel amplitude_damping()
{
    LindbladModel m;
    m.dim = 2;
    m.omega = 2.0 * std::numbers::pi;
    m.h_fourier[0] = Matrix::Zero(2, 2);
    m.jumps.push_back(Jump{sigma_plus(), 1.0, {}});
    return m;
}

int count_lines(const std::string& text)
{
    int n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

} // namespace

TEST_CASE("model JSON round trip preserves every matrix")
{
    RngStream rng(61);
    RandomModelOptions mo;
    mo.n_harmonics = 2;
    mo.n_jumps = 2;
    LindbladModel m = make_random_model(rng, 3, mo);
    m.jumps[0].op_harmonics[1] = rng.matrix(3);
    m.jumps[0].op_harmonics[-1] = rng.matrix(3);

    const LindbladModel back = model_from_json(model_to_json(m));
    REQUIRE(back.dim == m.dim);
    REQUIRE(back.omega == m.omega);
    REQUIRE(back.h_fourier.size() == m.h_fourier.size());
    for (const auto& [l, h] : m.h_fourier) {
        REQUIRE((back.h_fourier.at(l) - h).norm() == 0.0);
    }
    REQUIRE(back.jumps.size() == m.jumps.size());
    REQUIRE((back.jumps[0].op - m.jumps[0].op).norm() == 0.0);
    REQUIRE(back.jumps[0].rate == m.jumps[0].rate);
    REQUIRE((back.jumps[0].op_harmonics.at(1) - m.jumps[0].op_harmonics.at(1)).norm() == 0.0);
}

TEST_CASE("band model JSON round trip and beta handling")
{
    RngStream rng(62);
    TwoBandModel tb;
    tb.omega = 1.5;
    tb.gamma0 = 0.4;
    tb.beta = 2.5;
    tb.amplitude = Complex(0.3, -0.2);
    KPoint kp;
    kp.k = 0.25;
    kp.eps1 = -0.8;
    kp.eps2 = 0.9;
    kp.v0 = rng.hermitian(2, 1.0);
    kp.dv_dk = rng.hermitian(2, 1.0);
    tb.k_grid.push_back(kp);
    assign_uniform_weights(tb);

    const BandModelFile back = band_model_from_json(band_model_to_json(tb));
    REQUIRE_FALSE(back.beta_defaulted);
    REQUIRE(back.model.beta == tb.beta);
    REQUIRE(back.model.amplitude == tb.amplitude);
    REQUIRE((back.model.k_grid[0].v0 - kp.v0).norm() == 0.0);
    REQUIRE(back.model.k_grid[0].weight == 1.0);

    // "inf" round-trips, absent beta defaults with the flag set
    TwoBandModel cold = tb;
    cold.beta = std::numeric_limits<double>::infinity();
    json j = band_model_to_json(cold);
    REQUIRE(j["beta"] == "inf");
    REQUIRE(band_model_from_json(j).model.beta == cold.beta);
    j.erase("beta");
    const BandModelFile defaulted = band_model_from_json(j);
    REQUIRE(defaulted.beta_defaulted);
    REQUIRE(defaulted.model.beta == std::numeric_limits<double>::infinity());
}

TEST_CASE("parse errors carry the parse category")
{
    REQUIRE_THROWS_AS(model_from_json(json::parse("{\"dim\": 2}")), ParseError);
    json bad;
    bad["dim"] = 2;
    bad["omega"] = 1.0;
    bad["h_fourier"] = json::array({{{"l", 0}, {"real_part", {{0, 0}}}, {"imag_part", {{0}}}}});
    REQUIRE_THROWS_AS(model_from_json(bad), ParseError);
    REQUIRE_THROWS_AS(read_model("/nonexistent/path/model.json"), IoError);
}

TEST_CASE("spectrum CSV: one row per eigenvalue, one steady row for amplitude damping")
{
    const LindbladModel m = amplitude_damping();
    PropagatorConfig cfg;
    cfg.slices_per_period = 1;
    const FloquetSpectrum spec = decompose(floquet_operator(m, cfg));
    const std::string csv = spectrum_csv(spec);

    REQUIRE(count_lines(csv) == 5); // header + 4 rows
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    REQUIRE(header ==
            "re_q,im_q,modulus,class,trace_re,trace_im,cluster_id,algebraic_mult,geometric_mult");
    int steady_rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find(",steady,") != std::string::npos) ++steady_rows;
    }
    REQUIRE(steady_rows == 1);
}

TEST_CASE("optics CSV: totals footer and deterministic bytes")
{
    RngStream rng(63);
    TwoBandModel tb;
    tb.omega = 1.4;
    tb.gamma0 = 0.5;
    tb.beta = 3.0;
    tb.amplitude = Complex(0.2, 0.1);
    for (int i = 0; i < 4; ++i) {
        KPoint kp;
        kp.k = i / 4.0;
        kp.eps1 = -0.7;
        kp.eps2 = 0.8;
        kp.v0 = rng.hermitian(2, 1.0);
        kp.dv_dk = rng.hermitian(2, 1.0);
        tb.k_grid.push_back(kp);
    }
    assign_uniform_weights(tb);

    const std::string a = optics_csv(sweep(tb));
    const std::string b = optics_csv(sweep(tb));
    REQUIRE(a == b);
    REQUIRE(count_lines(a) == 6); // header + 4 rows + totals
    REQUIRE(a.find("total,") != std::string::npos);

    const std::string with_header = optics_csv(sweep(tb), false, true);
    REQUIRE(with_header.find("# beta absent") != std::string::npos);
}

TEST_CASE("ness CSV carries the residual header and both sections")
{
    const LindbladModel m = amplitude_damping();
    PropagatorConfig cfg;
    cfg.slices_per_period = 1;
    const Superoperator uf = floquet_operator(m, cfg);
    const FloquetSpectrum spec = decompose(uf);
    const Ness ness = extract_ness(spec, uf, m, cfg);
    const std::string csv = ness_csv(ness);
    REQUIRE(csv.find("# fixed_point_residual=") != std::string::npos);
    REQUIRE(csv.find("sample,t,i,j,re,im") != std::string::npos);
    REQUIRE(csv.find("-1,") != std::string::npos); // rho0 section
}

TEST_CASE("fmt_double round-trips exactly")
{
    for (double x : {0.0, 1.0, -4.0 / 9.0, 1e-300, 3.0e17, 0.1}) {
        REQUIRE(std::stod(fmt_double(x)) == x);
    }
}
