#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "annlab/conformal.hpp"
#include "annlab/weierstrass.hpp"

namespace annlab {

enum class FieldKind { ClosedForm, Weierstrass };

// One experiment: a field, the analyses to run on it, and the numeric knobs.
// Plain value data, so configs can be built in code or parsed from JSON
// interchangeably; see the README for the schema.
struct Scenario {
    std::string name;

    FieldKind kind = FieldKind::ClosedForm;
    double log_coeff = 0.0;  // closed form: log_coeff * log|z| + Re(series)
    LaurentSeries analytic;
    int gauss_winding = 0;  // surface data: g = z^winding * e^H, dh = height_form dz
    LaurentSeries H;
    LaurentSeries height_form;
    double r_prime = 1.0;
    std::string builtin_source;  // catalog name the field was copied from, if any

    std::vector<std::string> analyses;

    double r_inner = 0.05;
    int n_radial = 129;
    int n_angular = 256;
    double r_outer = 1.0;

    double level = 0.0;
    std::uint64_t seed = 0x5eedab1eULL;
    std::map<std::string, double> tolerances;

    // conformal-type options; "auto" picks halfspace for surface data and the
    // plain annulus measure otherwise
    std::string conformal_variant = "auto";
    cplx basepoint{0.0, 0.0};         // 0 means the geometric mean radius, real axis
    std::vector<double> inner_radii;  // puncture trend; empty means 1e-2, 1e-3, 1e-4

    PolarGrid grid() const { return PolarGrid(r_inner, n_radial, n_angular, r_outer); }
};

// Parse and fully validate one scenario document.  Unknown keys, unknown
// analyses, bad grids and unbuildable surface data all fail here with
// DomainError, never at run time.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario parse_scenario(const std::string& text);

// Canonical echo; scenario_from_json(scenario_to_json(s)) is the identity.
nlohmann::json scenario_to_json(const Scenario& s);

// The harmonic field the scalar analyses see: the closed form itself, or the
// height coordinate of the surface data.
HarmonicField scenario_field(const Scenario& s);

// Assembled surface data; DomainError when the scenario carries none.
WeierstrassData scenario_surface(const Scenario& s);

struct CatalogEntry {
    std::string name;
    std::string summary;
};

const std::vector<CatalogEntry>& catalog();
Scenario builtin_scenario(const std::string& name);

struct RunReport {
    nlohmann::json document;
    bool nonconvergence = false;  // some recorded analysis stalled numerically
};

// Run the requested analyses in declaration order.  Analyses that throw
// library errors are recorded as structured results and the run continues;
// only foreign exceptions escape.
RunReport run_scenario(const Scenario& s);

// Report bytes with the timestamp block removed: equal strings mean equal
// runs for fixed field, grid and seed.
std::string deterministic_dump(const RunReport& report);

// `annlab run|list` entry point; returns the process exit code: 0 ok, 2 bad
// config, 3 recorded nonconvergence, 4 internal failure.
int run_cli(int argc, const char* const* argv);

}  // namespace annlab
