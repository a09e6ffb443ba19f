#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrt/error.hpp"

namespace mrt {

// Structural-material constants. SI units internally (Pa, kg/m^3); the two
// informational fields are carried through for reporting only.
struct Material {
    std::string name;
    double youngs_modulus = 0.0; // Pa
    double density = 0.0;        // kg/m^3
    double poisson = 0.0;
    std::optional<double> deposition_temp_c;
    std::optional<double> conductivity; // 1/(ohm*m)

    bool operator==(const Material&) const = default;
};

// Throws errc::invariant naming the offending field.
void validate(const Material& m);

// Built-in constants for the six common structural materials:
// polysilicon, silicon<100>, polydiamond, silicon-carbide, polysige, nickel.
// Lookup is case-insensitive and accepts a few aliases (sic, sige,
// silicon100). Unknown names raise errc::unknown_material listing what is
// available.
const Material& builtin_material(std::string_view name);
std::vector<std::string> builtin_material_names();

// sqrt(E/rho), m/s.
double acoustic_velocity(const Material& m);

// Parses a JSON material file: an array of objects with keys
// name, E_GPa, rho, poisson and optional dep_temp_C, conductivity.
// Parse failures report the line number; invariant violations name the field
// and record; duplicate names within the file are rejected.
std::vector<Material> load_materials(const std::string& path);
std::vector<Material> parse_materials(const std::string& json_text);

// Serializes in the same file format (E back in GPa).
std::string materials_to_json(const std::vector<Material>& mats);

// Name-keyed registry: built-ins preloaded, user files merged on top,
// immutable once handed to the analysis code.
class MaterialRegistry {
public:
    MaterialRegistry(); // preloads the built-ins

    void add(Material m);                      // errc::duplicate_material on clash
    void load_file(const std::string& path);   // add() for every record
    const Material& get(std::string_view name) const;
    std::vector<std::string> names() const;

private:
    std::vector<Material> materials_;
};

} // namespace mrt
