#ifndef PCV_FAMILIES_HPP
#define PCV_FAMILIES_HPP

#include <string>

#include "pcv/expr.hpp"
#include "pcv/paracontact.hpp"

namespace pcv {

enum class FamilyCase { case1, case2 };

/// Construct one of the two explicit families on R^2 x (z_min, z_max):
///   shared:  xi = d/dx,  eta = dx - a dz,  lambda = r(z)
///   case 1:  a = -2y + f(z),  b = -(y/2) r'/r - 2x r + s(z)
///            g = [[1,0,-a],[0, 1,-b],[-a,-b,-1+a^2+b^2]]
///   case 2:  a =  2y + f(z),  b = -(y/2) r'/r + 2x r + s(z)
///            g = [[1,0,-a],[0,-1, b],[-a, b, 1+a^2-b^2]]
/// with phi = [[0,a,-ab],[0,b,1-b^2],[0,1,-b]] in both cases.
/// r must stay positive on the declared interval (checked on a dense
/// sample); the returned structure has already passed the axiom checks on a
/// validation sample.
ParacontactStructure build_family(FamilyCase c, const FunctionSpec& r, const FunctionSpec& f,
                                  const FunctionSpec& s, double z_min, double z_max,
                                  const std::string& label = "");

ParacontactStructure build_family(FamilyCase c, const std::string& r, const std::string& f,
                                  const std::string& s, double z_min, double z_max,
                                  const std::string& label = "");

/// The built-in example: case 1 with r = z, f = 1, s = 2 on {z != 0}.
ParacontactStructure example_preset();

/// Synthetic structure whose h operator has the rotational (h3) normal form,
/// built from the frame xi = d/dx, X = e^{-lam x} d/dy,
/// phiX = e^{lam x} (2y d/dx - lam y^2 d/dy + d/dz); constant
/// kappa = -1 - lam^2 < -1.  Not one of the two families.
ParacontactStructure h3_preset(double lam = 1.5);

/// K-paracontact structure (h = 0): xi = d/dx, X = d/dy, phiX = 2y d/dx + d/dz
/// with the frame-dual metric; satisfies the necessary para-Sasakian
/// curvature condition.
ParacontactStructure k_paracontact_preset();

ParacontactStructure preset(const std::string& name); // "ex1" | "h3" | "kpara"

/// Manifest round-trips: expression sources verbatim, numbers shortest
/// round-trip representation, so save(load(m)) == m byte for byte.
std::string manifest_to_json(const StructureRecipe& r, const std::string& label);
ParacontactStructure structure_from_manifest_json(const std::string& json_text);
ParacontactStructure structure_from_recipe(const StructureRecipe& r, const std::string& label);

ParacontactStructure load_manifest_file(const std::string& path);
void save_manifest_file(const ParacontactStructure& s, const std::string& path);

} // namespace pcv

#endif
