#include "wvi/label_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wvi/error.hpp"
#include "wvi/kdtree.hpp"
#include "wvi/parallel.hpp"

namespace wvi {

namespace {

// Tie priority for three-way vertex label splits. Construction first:
// built obstruction must not be under-reported.
int tie_priority(SemanticLabel l) {
  switch (l) {
    case SemanticLabel::Construction:
      return 3;
    case SemanticLabel::Greenery:
      return 2;
    case SemanticLabel::Waterbody:
      return 1;
    case SemanticLabel::Sky:
      return 0;
  }
  return 0;
}

// Uniform double in [0,1) from the top 53 bits; avoids distribution objects
// so streams are identical across standard libraries.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_no_sky(const std::vector<SemanticLabel>& labels, const char* what) {
  for (SemanticLabel l : labels) {
    if (l == SemanticLabel::Sky)
      throw ValidationError(std::string("sky label on ") + what + " (background-only)");
  }
}

}  // namespace

std::vector<SemanticLabel> derive_triangle_labels(
    const std::vector<SemanticLabel>& vertex_labels,
    const std::vector<std::array<uint32_t, 3>>& triangles) {
  std::vector<SemanticLabel> out;
  out.reserve(triangles.size());
  for (const auto& tri : triangles) {
    SemanticLabel a = vertex_labels[tri[0]];
    SemanticLabel b = vertex_labels[tri[1]];
    SemanticLabel c = vertex_labels[tri[2]];
    SemanticLabel winner;
    if (a == b || a == c) {
      winner = a;
    } else if (b == c) {
      winner = b;
    } else {
      winner = a;
      if (tie_priority(b) > tie_priority(winner)) winner = b;
      if (tie_priority(c) > tie_priority(winner)) winner = c;
    }
    out.push_back(winner);
  }
  return out;
}

LabeledMesh make_labeled_mesh(Mesh mesh, std::vector<SemanticLabel> vertex_labels) {
  if (vertex_labels.size() != mesh.vertices.size())
    throw ValidationError("vertex label count does not match vertex count");
  check_no_sky(vertex_labels, "mesh vertex");
  LabeledMesh out;
  out.triangle_labels = derive_triangle_labels(vertex_labels, mesh.triangles);
  out.mesh = std::move(mesh);
  out.vertex_labels = std::move(vertex_labels);
  return out;
}

LabeledMesh make_labeled_mesh(Mesh mesh, std::vector<SemanticLabel> vertex_labels,
                              std::vector<SemanticLabel> triangle_labels) {
  if (vertex_labels.size() != mesh.vertices.size())
    throw ValidationError("vertex label count does not match vertex count");
  if (triangle_labels.size() != mesh.triangles.size())
    throw ValidationError("triangle label count does not match triangle count");
  check_no_sky(vertex_labels, "mesh vertex");
  check_no_sky(triangle_labels, "mesh triangle");
  LabeledMesh out;
  out.mesh = std::move(mesh);
  out.vertex_labels = std::move(vertex_labels);
  out.triangle_labels = std::move(triangle_labels);
  return out;
}

SurfaceSamples sample_surface(const Mesh& mesh, double density_per_m2, uint64_t seed) {
  if (mesh.empty()) throw EmptyMeshError("cannot sample an empty mesh");
  if (!(density_per_m2 > 0.0)) throw ValidationError("sampling density must be > 0");

  // Cumulative area table for area-weighted triangle choice.
  std::vector<double> cumulative(mesh.triangles.size());
  double total = 0.0;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    total += mesh.triangle_area(t);
    cumulative[t] = total;
  }
  if (!(total > 0.0)) throw EmptyMeshError("mesh has zero total area");

  uint64_t count = static_cast<uint64_t>(std::llround(total * density_per_m2));
  SurfaceSamples samples;
  samples.positions.reserve(count);
  samples.triangle_index.reserve(count);

  std::mt19937_64 rng(seed);
  for (uint64_t i = 0; i < count; ++i) {
    double pick = next_uniform(rng) * total;
    size_t t = std::lower_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin();
    if (t >= cumulative.size()) t = cumulative.size() - 1;

    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    double u = next_uniform(rng);
    double v = next_uniform(rng);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    samples.positions.push_back(a + (b - a) * u + (c - a) * v);
    samples.triangle_index.push_back(static_cast<uint32_t>(t));
  }
  return samples;
}

LabeledPointCloud sample_labeled_surface(const LabeledMesh& labeled, double density_per_m2,
                                         uint64_t seed) {
  SurfaceSamples samples = sample_surface(labeled.mesh, density_per_m2, seed);
  LabeledPointCloud cloud;
  cloud.positions = std::move(samples.positions);
  cloud.labels.reserve(samples.triangle_index.size());
  for (uint32_t t : samples.triangle_index) cloud.labels.push_back(labeled.triangle_labels[t]);
  return cloud;
}

LabeledMesh transfer_labels(const Mesh& mesh, const LabeledPointCloud& cloud, unsigned workers,
                            bool brute_force) {
  if (cloud.empty()) throw EmptyCloudError("label transfer needs a non-empty cloud");
  check_no_sky(cloud.labels, "cloud point");

  std::vector<SemanticLabel> vertex_labels(mesh.vertices.size());
  if (brute_force) {
    parallel_for(mesh.vertices.size(), workers, [&](size_t v) {
      vertex_labels[v] = cloud.labels[brute_force_nearest(cloud.positions, mesh.vertices[v])];
    });
  } else {
    KdTree3 tree(cloud.positions);
    parallel_for(mesh.vertices.size(), workers, [&](size_t v) {
      vertex_labels[v] = cloud.labels[tree.nearest(mesh.vertices[v])];
    });
  }
  return make_labeled_mesh(mesh, std::move(vertex_labels));
}

}  // namespace wvi
