#pragma once

// Graphviz export of contexts, schemas, networks and resolution paths.

#include "conman/resolution.hpp"

#include <string>

namespace conman::dsl {

/// Types as circles grouped into one cluster per role.
std::string export_dot(const Context& c, const std::string& name = "context");

std::string export_dot(const Schema& s, const Context& c, const std::string& name = "schema");

/// The network as one cluster. Edge statuses are taken from `report` when
/// given; inconsistent edges are drawn dashed, bold and red.
std::string export_dot(const Network& n, const ConsistencyReport* report = nullptr,
                       const std::string& name = "network");

/// One cluster per network, laid out left to right.
std::string export_dot(const ResolutionPath& p, const PathReport* report = nullptr,
                       const std::string& name = "path");

} // namespace conman::dsl
