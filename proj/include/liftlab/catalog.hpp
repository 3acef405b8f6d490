#pragma once

// Built-in manifolds and vector fields. Every entry is expression text so that the
// catalog goes through the same parser as user configs.

#include <string>
#include <vector>

#include "liftlab/lift_fields.hpp"

namespace liftlab {

/// euclidean1..3, polar2, sphere2, halfplane2, torus_flat2.
std::vector<std::string> catalog_manifold_names();

/// Accepts any "euclidean<n>"; sphere2 takes a radius.
ManifoldSpec catalog_manifold(const std::string& name, double radius = 1.0);

struct CatalogField {
  std::string manifold;
  std::string name;
  std::vector<std::string> components;
  KnownClass known = KnownClass::none;
  double rho = 0.0;
  std::string note;
};

struct CatalogAffineField {
  std::string manifold;
  std::string name;
  std::vector<std::vector<std::string>> alpha;
  std::vector<std::string> beta;
  std::vector<std::string> horiz;
  std::string note;
};

const std::vector<CatalogField>& catalog_fields();
const std::vector<CatalogAffineField>& catalog_affine_fields();

/// Catalog base fields defined on the named manifold.
std::vector<BaseField> catalog_base_fields(const std::string& manifold);
BaseField catalog_base_field(const std::string& manifold, const std::string& name);

std::vector<std::pair<std::string, AffineFiberField>> catalog_affine(const std::string& manifold);

/// Complete, horizontal and vertical lifts of every catalog field plus the affine
/// catalog, for the named manifold.
std::vector<LiftField> catalog_lift_fields(const ManifoldSpec& spec);

std::string to_string(KnownClass k);

}  // namespace liftlab
