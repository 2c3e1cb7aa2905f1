#include <doctest.h>

#include <cmath>
#include <numbers>

#include "coverplan/errors.hpp"
#include "coverplan/mesh.hpp"
#include "coverplan/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace coverplan;

TEST_SUITE("geometry") {

TEST_CASE("unit cube OBJ loads with analytic surface area") {
    const auto path = testutil::write_temp("cube.obj", testutil::unit_cube_obj());
    const auto mesh = load_mesh(path, MeshFormat::Obj);
    CHECK(mesh.triangle_count() == 12);
    CHECK(mesh.total_area() == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(mesh.bbox().min.x == doctest::Approx(0.0));
    CHECK(mesh.bbox().max.z == doctest::Approx(1.0));
    CHECK(testutil::watertight(mesh));
}

TEST_CASE("truncated binary STL reports the byte offset") {
    std::string data(80, '\0');
    const std::uint32_t count = 10;
    data.append(reinterpret_cast<const char*>(&count), 4);
    data.append(60, '\0');  // far less than 10 * 50 bytes of facets
    const auto path = testutil::write_temp("truncated.stl", data);
    CHECK_THROWS_AS(load_mesh(path, MeshFormat::StlBinary), MeshFormatError);
    try {
        load_mesh(path, MeshFormat::StlBinary);
    } catch (const MeshFormatError& err) {
        CHECK(std::string(err.what()).find("offset") != std::string::npos);
    }
}

TEST_CASE("malformed OBJ face reports the line") {
    const auto path = testutil::write_temp("bad.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
    CHECK_THROWS_AS(load_mesh(path, MeshFormat::Obj), MeshFormatError);
}

TEST_CASE("empty mesh rejected") {
    const auto path = testutil::write_temp("empty.obj", "# nothing\n");
    CHECK_THROWS_AS(load_mesh(path, MeshFormat::Obj), InvalidInputError);
}

TEST_CASE("generated sphere matches the requested budget") {
    const auto sphere = generate_sphere(10.0, 960);
    CHECK(sphere.triangle_count() == 960);
    const double analytic = 4.0 * std::numbers::pi * 100.0;
    CHECK(sphere.total_area() > 0.95 * analytic);
    CHECK(sphere.total_area() < analytic);
    CHECK(testutil::watertight(sphere));

    CHECK(sphere.bbox().min.x == doctest::Approx(-10.0).epsilon(0.02));
    CHECK(sphere.bbox().max.y == doctest::Approx(10.0).epsilon(0.02));
    CHECK(sphere.bbox().max.z == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("tiny budget yields a watertight tetrahedron") {
    const auto tetra = generate_sphere(1.0, 4);
    CHECK(tetra.triangle_count() == 4);
    CHECK(testutil::watertight(tetra));
    CHECK(tetra.contains({0, 0, 0}));
}

TEST_CASE("sphere budgets land within ten percent") {
    for (int budget : {24, 100, 500, 960, 2000}) {
        const auto mesh = generate_sphere(3.0, budget);
        CHECK(std::abs(static_cast<double>(mesh.triangle_count()) - budget) <= 0.1 * budget);
        CHECK(testutil::watertight(mesh));
    }
}

TEST_CASE("ply round trip preserves count and area") {
    const auto sphere = generate_sphere(10.0, 960);
    const auto path = testutil::temp_file("sphere.ply");
    save_ply(path, sphere);
    const auto reloaded = load_mesh(path, MeshFormat::Ply);
    CHECK(reloaded.triangle_count() == sphere.triangle_count());
    CHECK(reloaded.total_area() ==
          doctest::Approx(sphere.total_area()).epsilon(1e-9));
}

TEST_CASE("stl round trip through ascii and binary readers") {
    // Hand-rolled binary STL of the unit cube.
    const auto cube = load_mesh(testutil::write_temp("cube2.obj", testutil::unit_cube_obj()),
                                MeshFormat::Obj);
    std::string stl(80, '\0');
    const std::uint32_t n = static_cast<std::uint32_t>(cube.triangle_count());
    stl.append(reinterpret_cast<const char*>(&n), 4);
    for (std::size_t t = 0; t < cube.triangle_count(); ++t) {
        float buf[12] = {};
        for (int k = 0; k < 3; ++k) {
            const Vec3 v = cube.triangle_vertex(static_cast<int>(t), k);
            buf[3 + 3 * k] = static_cast<float>(v.x);
            buf[4 + 3 * k] = static_cast<float>(v.y);
            buf[5 + 3 * k] = static_cast<float>(v.z);
        }
        stl.append(reinterpret_cast<const char*>(buf), 48);
        stl.append(2, '\0');
    }
    const auto bin_path = testutil::write_temp("cube.stl", stl);
    CHECK(detect_mesh_format(bin_path) == MeshFormat::StlBinary);
    const auto loaded = load_mesh(bin_path, MeshFormat::StlBinary);
    CHECK(loaded.triangle_count() == 12);
    CHECK(loaded.total_area() == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(testutil::watertight(loaded));

    std::string ascii = "solid cube\n";
    for (std::size_t t = 0; t < cube.triangle_count(); ++t) {
        ascii += "facet normal 0 0 0\nouter loop\n";
        for (int k = 0; k < 3; ++k) {
            const Vec3 v = cube.triangle_vertex(static_cast<int>(t), k);
            ascii += "vertex " + std::to_string(v.x) + " " + std::to_string(v.y) + " " +
                     std::to_string(v.z) + "\n";
        }
        ascii += "endloop\nendfacet\n";
    }
    ascii += "endsolid cube\n";
    const auto ascii_path = testutil::write_temp("cube_ascii.stl", ascii);
    CHECK(detect_mesh_format(ascii_path) == MeshFormat::StlAscii);
    const auto loaded_ascii = load_mesh(ascii_path, MeshFormat::StlAscii);
    CHECK(loaded_ascii.triangle_count() == 12);
    CHECK(loaded_ascii.total_area() == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("ray hits the sphere front face") {
    const auto sphere = generate_sphere(10.0, 960);
    const auto hit = sphere.ray_intersect({20, 0, 0}, {-1, 0, 0}, 100.0);
    REQUIRE(hit.has_value());
    CHECK(hit->distance == doctest::Approx(10.0).epsilon(0.02));

    CHECK_FALSE(sphere.ray_intersect({20, 0, 0}, {1, 0, 0}, 100.0).has_value());
}

TEST_CASE("ray intersection matches the all-triangle scan") {
    const auto sphere = generate_sphere(10.0, 960);
    Rng rng(12345);
    int hits = 0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 origin{rng.uniform(-25, 25), rng.uniform(-25, 25), rng.uniform(-25, 25)};
        Vec3 dir{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (norm(dir) < 1e-6) dir = {1, 0, 0};
        dir = normalized(dir);

        const auto fast = sphere.ray_intersect(origin, dir, 100.0);
        const auto slow = oracle::ray_scan(sphere, origin, dir, 100.0);
        REQUIRE(fast.has_value() == slow.has_value());
        if (fast) {
            ++hits;
            CHECK(fast->triangle_id == slow->triangle_id);
            CHECK(fast->distance == doctest::Approx(slow->distance).epsilon(1e-12));
        }
    }
    CHECK(hits > 100);  // the sample box actually exercises hits
}

TEST_CASE("ray hit point lies on the triangle plane") {
    const auto sphere = generate_sphere(10.0, 960);
    Rng rng(777);
    for (int i = 0; i < 200; ++i) {
        const Vec3 origin{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20)};
        Vec3 dir = normalized(Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
        if (norm(dir) < 1e-9) continue;
        const auto hit = sphere.ray_intersect(origin, dir, 100.0);
        if (!hit) continue;
        const Vec3 n = sphere.normal(hit->triangle_id);
        const double off = dot(n, hit->point - sphere.triangle_vertex(hit->triangle_id, 0));
        CHECK(std::abs(off) < 1e-6);
    }
}

TEST_CASE("segment distance matches the all-triangle scan") {
    const auto sphere = generate_sphere(10.0, 960);

    CHECK(sphere.segment_min_distance({-15, 0, 0}, {15, 0, 0}) == doctest::Approx(0.0));
    CHECK(sphere.segment_min_distance({12, -20, 0}, {12, 20, 0}) ==
          doctest::Approx(2.0).epsilon(0.02));

    Rng rng(999);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 a{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20)};
        const Vec3 b{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20)};
        if (norm(a - b) < 1e-9) continue;
        CHECK(sphere.segment_min_distance(a, b) ==
              doctest::Approx(oracle::segment_scan(sphere, a, b)).epsilon(1e-9));
    }
}

TEST_CASE("point distance and containment") {
    const auto sphere = generate_sphere(10.0, 960);
    Rng rng(31337);
    for (int i = 0; i < 500; ++i) {
        const Vec3 p{rng.uniform(-15, 15), rng.uniform(-15, 15), rng.uniform(-15, 15)};
        CHECK(sphere.point_min_distance(p) ==
              doctest::Approx(oracle::point_scan(sphere, p)).epsilon(1e-9));
    }
    CHECK(sphere.contains({0, 0, 0}));
    CHECK_FALSE(sphere.contains({11, 0, 0}));
    CHECK(sphere.distance_to_structure({0, 0, 0}) == 0.0);
    CHECK(sphere.distance_to_structure({12, 0, 0}) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("nested box hidden fraction is the inner share") {
    const auto target = generate_occluded_target(OccludedStyle::NestedBox);
    CHECK(target.mesh.triangle_count() == 24);
    const double inner = 6.0 * 9.0;   // 3 m cube
    const double outer = 6.0 * 100.0; // 10 m cube
    CHECK(target.hidden_area_fraction ==
          doctest::Approx(inner / (inner + outer)).epsilon(1e-12));
    CHECK(target.hidden_ids.size() == 12);
}

TEST_CASE("occluded targets agree with the dense-viewpoint oracle") {
    // Probe sphere around the target plus sightlines down the channel axis.
    auto probes = [](const TriangleMesh& mesh) {
        std::vector<Vec3> viewpoints;
        const Vec3 c = mesh.bbox().center();
        const double r = norm(mesh.bbox().extent()) * 1.5;
        for (int i = 0; i < 24; ++i) {
            for (int j = 1; j < 12; ++j) {
                const double theta = 2.0 * std::numbers::pi * i / 24;
                const double phi = std::numbers::pi * j / 12;
                viewpoints.push_back(c + Vec3{r * std::sin(phi) * std::cos(theta),
                                              r * std::sin(phi) * std::sin(theta),
                                              r * std::cos(phi)});
            }
        }
        viewpoints.push_back(c + Vec3{0, 0, r});
        viewpoints.push_back(c - Vec3{0, 0, r});
        const Box3 box = mesh.bbox();
        for (double z = box.min.z; z <= box.max.z; z += 0.25) {
            for (double y = box.min.y; y <= box.max.y; y += 0.25) {
                viewpoints.push_back({box.min.x - 4.0, y, z});
                viewpoints.push_back({box.max.x + 4.0, y, z});
            }
            for (double x = box.min.x; x <= box.max.x; x += 0.25) {
                viewpoints.push_back({x, box.min.y - 4.0, z});
                viewpoints.push_back({x, box.max.y + 4.0, z});
            }
        }
        return viewpoints;
    };

    SUBCASE("channel block") {
        const auto target = generate_occluded_target(OccludedStyle::ChannelBlock);
        CHECK(target.hidden_area_fraction > 0.0);
        CHECK(testutil::watertight(target.mesh));

        const auto hidden = oracle::invisible_from(target.mesh, probes(target.mesh));
        CHECK(hidden == target.hidden_ids);

        double hidden_area = 0.0;
        for (int id : hidden) hidden_area += target.mesh.triangle_areas()[id];
        CHECK(target.hidden_area_fraction ==
              doctest::Approx(hidden_area / target.mesh.total_area()).epsilon(1e-12));
    }

    SUBCASE("plain cube has nothing hidden") {
        const auto cube = generate_box({-2, -2, 0}, {2, 2, 4});
        const auto hidden = oracle::invisible_from(cube, probes(cube));
        CHECK(hidden.empty());
    }

    SUBCASE("nested box hides exactly the inner faces") {
        const auto target = generate_occluded_target(OccludedStyle::NestedBox);
        const auto hidden = oracle::invisible_from(target.mesh, probes(target.mesh));
        CHECK(hidden == target.hidden_ids);
    }
}

}  // TEST_SUITE
