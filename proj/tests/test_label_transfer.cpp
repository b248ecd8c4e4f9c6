#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "wvi/error.hpp"
#include "wvi/kdtree.hpp"
#include "wvi/label_transfer.hpp"

using namespace wvi;

namespace {

const SemanticLabel G = SemanticLabel::Greenery;
const SemanticLabel W = SemanticLabel::Waterbody;
const SemanticLabel C = SemanticLabel::Construction;

std::vector<Vec3> random_points(uint64_t seed, size_t n, double spread) {
  std::mt19937_64 rng(seed);
  auto uni = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (size_t i = 0; i < n; ++i)
    pts.push_back({(uni() * 2 - 1) * spread, (uni() * 2 - 1) * spread, (uni() * 2 - 1) * spread});
  return pts;
}

// Snapped to a coarse lattice so distance ties are common.
std::vector<Vec3> lattice_points(uint64_t seed, size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (size_t i = 0; i < n; ++i)
    pts.push_back({static_cast<double>(rng() % 7), static_cast<double>(rng() % 7),
                   static_cast<double>(rng() % 7)});
  return pts;
}

// Two well-separated labeled boxes; the round-trip scene.
LabeledMesh two_box_scene() {
  LabeledMesh lm;
  test::add_box(lm, {0, 0, 0}, {4, 4, 4}, C);
  test::add_box(lm, {50, 0, 0}, {54, 4, 4}, G);
  return lm;
}

}  // namespace

TEST_CASE("derive_triangle_labels: majority and tie priority") {
  std::vector<std::array<uint32_t, 3>> tris = {{0, 1, 2}};
  CHECK(derive_triangle_labels({G, G, C}, tris)[0] == G);
  CHECK(derive_triangle_labels({G, W, C}, tris)[0] == C);
  CHECK(derive_triangle_labels({W, W, W}, tris)[0] == W);
  CHECK(derive_triangle_labels({W, G, G}, tris)[0] == G);
  CHECK(derive_triangle_labels({C, W, W}, tris)[0] == W);
  // tie order is independent of vertex order
  CHECK(derive_triangle_labels({C, G, W}, tris)[0] == C);
  CHECK(derive_triangle_labels({W, C, G}, tris)[0] == C);
}

TEST_CASE("kd-tree matches brute force, including ties") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    auto pts = random_points(seed, 2000, 10.0);
    // Duplicate a slice so exact-duplicate ties exist.
    for (size_t i = 0; i < 50; ++i) pts.push_back(pts[i * 3]);
    KdTree3 tree(pts);
    auto queries = random_points(seed ^ 0xbeef, 500, 12.0);
    for (const Vec3& q : queries) CHECK(tree.nearest(q) == brute_force_nearest(pts, q));
  }
  // Lattice clouds force many equidistant candidates.
  for (uint64_t seed : {7u, 8u}) {
    auto pts = lattice_points(seed, 3000);
    KdTree3 tree(pts);
    auto queries = lattice_points(seed ^ 0xfeed, 400);
    for (const Vec3& q : queries) CHECK(tree.nearest(q) == brute_force_nearest(pts, q));
  }
}

TEST_CASE("kd-tree handles degenerate clouds") {
  std::vector<Vec3> same(100, Vec3{1, 2, 3});
  KdTree3 tree(same);
  CHECK(tree.nearest({0, 0, 0}) == 0);  // all tied; lowest index
  CHECK_THROWS_AS(KdTree3(std::vector<Vec3>{}), EmptyCloudError);
}

TEST_CASE("sample_surface: count tracks area times density") {
  Mesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 2, 0}};  // right triangle, area 1
  mesh.triangles = {{0, 1, 2}};
  for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    auto s = sample_surface(mesh, 1000.0, seed);
    CHECK(s.positions.size() >= 900);
    CHECK(s.positions.size() <= 1100);
  }
}

TEST_CASE("sample_surface: area-weighted split across triangles") {
  Mesh mesh;
  // Triangle 0 area A = 0.5; triangle 1 area 3A = 1.5; total 2.
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {10, 0, 0}, {13, 0, 0}, {10, 1, 0}};
  mesh.triangles = {{0, 1, 2}, {3, 4, 5}};
  auto s = sample_surface(mesh, 5000.0, 42);  // 10,000 samples
  REQUIRE(s.positions.size() == 10000);
  size_t n0 = 0, n1 = 0;
  for (uint32_t t : s.triangle_index) (t == 0 ? n0 : n1)++;
  double ratio = static_cast<double>(n1) / n0;
  CHECK(ratio > 2.7);
  CHECK(ratio < 3.3);
}

TEST_CASE("sample_surface: samples lie inside their source triangle") {
  Mesh mesh;
  mesh.vertices = {{0, 0, 0}, {2, 0, 1}, {0, 3, -1}, {5, 5, 5}, {6, 5, 5}, {5, 7, 5}};
  mesh.triangles = {{0, 1, 2}, {3, 4, 5}};
  auto s = sample_surface(mesh, 400.0, 9);
  REQUIRE(!s.positions.empty());
  for (size_t i = 0; i < s.positions.size(); ++i) {
    const auto& tri = mesh.triangles[s.triangle_index[i]];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    // Barycentric solve against the triangle plane.
    Vec3 e1 = b - a, e2 = c - a, d = s.positions[i] - a;
    double d11 = dot(e1, e1), d12 = dot(e1, e2), d22 = dot(e2, e2);
    double r1 = dot(d, e1), r2 = dot(d, e2);
    double det = d11 * d22 - d12 * d12;
    double u = (d22 * r1 - d12 * r2) / det;
    double v = (d11 * r2 - d12 * r1) / det;
    CHECK(u >= -1e-12);
    CHECK(v >= -1e-12);
    CHECK(u + v <= 1.0 + 1e-12);
    CHECK(std::abs(dot(d - e1 * u - e2 * v, cross(e1, e2))) < 1e-9);
  }
}

TEST_CASE("sample_surface: deterministic per seed, possibly empty at tiny density") {
  Mesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  mesh.triangles = {{0, 1, 2}};
  auto a = sample_surface(mesh, 100.0, 77);
  auto b = sample_surface(mesh, 100.0, 77);
  CHECK(a.positions == b.positions);
  CHECK(a.triangle_index == b.triangle_index);

  auto tiny = sample_surface(mesh, 0.1, 1);  // expected 0.05 points
  CHECK(tiny.positions.empty());

  CHECK_THROWS_AS(sample_surface(Mesh{}, 10.0, 1), EmptyMeshError);
  CHECK_THROWS_AS(sample_surface(mesh, 0.0, 1), ValidationError);
}

TEST_CASE("transfer_labels: single source point labels everything") {
  LabeledMesh boxes = two_box_scene();
  LabeledPointCloud cloud;
  cloud.push_back({1, 1, 1}, C);
  LabeledMesh out = transfer_labels(boxes.mesh, cloud);
  for (SemanticLabel l : out.vertex_labels) CHECK(l == C);
  for (SemanticLabel l : out.triangle_labels) CHECK(l == C);
}

TEST_CASE("transfer_labels: equidistant tie goes to the lowest point index") {
  Mesh mesh;
  mesh.vertices = {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  mesh.triangles = {{0, 1, 2}};
  LabeledPointCloud cloud;
  cloud.push_back({1, 0, 0}, G);   // index 0
  cloud.push_back({-1, 0, 0}, W);  // index 1, same distance from vertex 0
  LabeledMesh out = transfer_labels(mesh, cloud);
  CHECK(out.vertex_labels[0] == G);
}

TEST_CASE("transfer_labels: kd-tree and brute-force agree; workers do not matter") {
  LabeledMesh scene = two_box_scene();
  LabeledPointCloud cloud = sample_labeled_surface(scene, 30.0, 5);
  LabeledMesh a = transfer_labels(scene.mesh, cloud, 1, /*brute_force=*/false);
  LabeledMesh b = transfer_labels(scene.mesh, cloud, 1, /*brute_force=*/true);
  LabeledMesh c = transfer_labels(scene.mesh, cloud, 4, /*brute_force=*/false);
  CHECK(a.vertex_labels == b.vertex_labels);
  CHECK(a.vertex_labels == c.vertex_labels);
}

TEST_CASE("transfer_labels: round trip recovers the two-box labels exactly") {
  LabeledMesh scene = two_box_scene();
  LabeledPointCloud cloud = sample_labeled_surface(scene, 100.0, 11);
  LabeledMesh out = transfer_labels(scene.mesh, cloud);
  CHECK(out.vertex_labels == scene.vertex_labels);
  CHECK(out.triangle_labels == scene.triangle_labels);

  // Fixed point: re-sample the transferred mesh and transfer again.
  LabeledPointCloud cloud2 = sample_labeled_surface(out, 100.0, 12);
  LabeledMesh out2 = transfer_labels(out.mesh, cloud2);
  CHECK(out2.vertex_labels == out.vertex_labels);
  CHECK(out2.triangle_labels == out.triangle_labels);
}

TEST_CASE("transfer_labels: error paths") {
  LabeledMesh scene = two_box_scene();
  CHECK_THROWS_AS(transfer_labels(scene.mesh, LabeledPointCloud{}), EmptyCloudError);
  LabeledPointCloud sky_cloud;
  sky_cloud.push_back({0, 0, 0}, SemanticLabel::Sky);
  CHECK_THROWS_AS(transfer_labels(scene.mesh, sky_cloud), ValidationError);
}
