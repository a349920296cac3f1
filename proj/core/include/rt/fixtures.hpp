#pragma once

#include <map>
#include <string>
#include <vector>

#include "rt/morse.hpp"

namespace rt {

// One 0-cell p and one 1-cell q with boundary 1 - g.
MorseData circle(const std::string& generator = "g");
// Cyclic quotient Z -> Z/m composed with the regular representation.
Representation circle_representation(int m, int rank = 1);

// Circle on vertices v_k for k in `vertices` (sorted, containing 0) and edges e_k from each
// vertex to the next; the last edge closes up with holonomy g.
MorseData circle_triangulation(const std::vector<int>& vertices, const std::string& generator = "g");
MorseData circle_triangulation(int n, const std::string& generator = "g");
// The n-vertex circle over the triangulation on `coarse` vertices.
SubdivisionData circle_subdivision(int n, const std::vector<int>& coarse, const std::string& generator = "g");
// Carriers of the n-vertex circle in the triangulation on `coarse` vertices.
CarrierMap circle_carriers(int n, const std::vector<int>& coarse);

// Product cell structure with cells "x:y"; generators of b follow those of a.
MorseData product(const MorseData& a, const MorseData& b);
SubdivisionData product(const SubdivisionData& a, const SubdivisionData& b);
CarrierMap product(const CarrierMap& a, const CarrierMap& b, std::size_t generators_of_a);
// Product of two one-vertex circles with holonomies a and b.
MorseData torus();
// Z^2 -> Z/m x Z/m composed with the regular representation.
Representation torus_representation(int m, int rank = 1);

// Fox-calculus cell structure of the closed genus-2 surface.
MorseData genus2();
// a1, a2 -> i and b1, b2 -> j in the quaternion group.
Representation genus2_representation();

// Self-indexing-like heights on the n-vertex circle: v_0 is the minimum and e_0 the maximum.
std::map<std::string, double> circle_heights(int n);
std::map<std::string, double> product_heights(const std::map<std::string, double>& a,
                                              const std::map<std::string, double>& b);

// Vertices of the n-cycle joined in order, closing up through g.
TransportGraph circle_transport_graph(int n);
// n1 x n2 grid on the torus with one contractible loop per square.
TransportGraph torus_transport_graph(int n1, int n2);

}  // namespace rt
