// swrap: shrink-wrapped isosurface extraction pipeline.
//
// Subcommands:
//   ingest   mesh.obj -> SDFGRID1 grid file
//   shrink   field spec -> UV-parameterized OBJ surface
//   mc       grid file -> marching cubes OBJ baseline
//   eval     two meshes -> chamfer distance / normal consistency report
//   texture  checkerboard PPM for inspecting the parameterization
//
// Exit codes: 0 success, 2 parameter error, 3 input-data error,
// 4 numerical failure (divergence).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shrinkwrap/marching_cubes.hpp"
#include "shrinkwrap/mesh.hpp"
#include "shrinkwrap/mesh_to_sdf.hpp"
#include "shrinkwrap/metrics.hpp"
#include "shrinkwrap/sdf/analytic.hpp"
#include "shrinkwrap/sdf/grid.hpp"
#include "shrinkwrap/sdf/mlp.hpp"
#include "shrinkwrap/shrink.hpp"
#include "shrinkwrap/texture.hpp"

namespace sw = shrinkwrap;

namespace {

std::vector<double> parse_numbers(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(std::stod(tok));
    return out;
}

/// Field spec mini-grammar:
///   sphere:R
///   box:hx,hy,hz[,corner-radius]
///   capsule:ax,ay,az,bx,by,bz,R
///   <path>   (SDFGRID1 binary grid or MLPSDF1 text weights, by magic)
std::unique_ptr<sw::ScalarField3> load_field(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string kind = spec.substr(0, colon);
        const std::string args = spec.substr(colon + 1);
        try {
            if (kind == "sphere") {
                const auto v = parse_numbers(args);
                if (v.size() != 1) throw std::invalid_argument("sphere:R");
                return std::make_unique<sw::AnalyticSdf>(
                    sw::AnalyticSdf::sphere({0, 0, 0}, v[0]));
            }
            if (kind == "box") {
                const auto v = parse_numbers(args);
                if (v.size() != 3 && v.size() != 4)
                    throw std::invalid_argument("box:hx,hy,hz[,r]");
                return std::make_unique<sw::AnalyticSdf>(sw::AnalyticSdf::box(
                    {0, 0, 0}, {v[0], v[1], v[2]}, v.size() == 4 ? v[3] : 0.0));
            }
            if (kind == "capsule") {
                const auto v = parse_numbers(args);
                if (v.size() != 7)
                    throw std::invalid_argument("capsule:ax,ay,az,bx,by,bz,R");
                return std::make_unique<sw::AnalyticSdf>(sw::AnalyticSdf::capsule(
                    {v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6]));
            }
        } catch (const std::exception& e) {
            throw std::invalid_argument("bad field spec '" + spec +
                                        "': " + e.what());
        }
    }
    // A file: sniff the magic.
    std::ifstream is(spec, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open field file: " + spec);
    char magic[8] = {};
    is.read(magic, 8);
    is.close();
    if (std::string_view(magic, 8) == "SDFGRID1")
        return std::make_unique<sw::GridSdf>(sw::GridSdf::load(spec));
    return std::make_unique<sw::MlpSdf>(sw::MlpSdf::load(spec));
}

int cmd_ingest(const std::string& mesh_path, const std::string& out_path,
               int resolution, double padding, int threads) {
    std::vector<std::string> warnings;
    const sw::TriangleMesh mesh = sw::load_obj(mesh_path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    const sw::GridSdf grid =
        sw::mesh_to_grid_sdf(mesh, resolution, padding, threads);
    grid.save(out_path);
    float lo = grid.values()[0], hi = grid.values()[0];
    for (float v : grid.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const sw::Vec3 mc = grid.max_corner();
    std::cout << "grid " << grid.nx() << "x" << grid.ny() << "x" << grid.nz()
              << " origin (" << grid.origin().x << ", " << grid.origin().y
              << ", " << grid.origin().z << ") max (" << mc.x << ", " << mc.y
              << ", " << mc.z << ") spacing " << grid.spacing() << " values ["
              << lo << ", " << hi << "]\n";
    return 0;
}

int cmd_shrink(const std::string& field_spec, const std::string& out_path,
               sw::ShrinkConfig cfg, double radius, std::string center_csv,
               bool verbose) {
    const auto field = load_field(field_spec);

    if (radius > 0.0) {
        cfg.initial_radius = radius;
    } else if (const auto* grid = dynamic_cast<const sw::GridSdf*>(field.get())) {
        // Largest sphere that fits the sampled domain, centered on it.
        const sw::Vec3 lo = grid->origin(), hi = grid->max_corner();
        cfg.initial_center = (lo + hi) * 0.5;
        const sw::Vec3 ext = hi - lo;
        cfg.initial_radius =
            0.48 * std::min({ext.x, ext.y, ext.z});
    }
    if (!center_csv.empty()) {
        const auto v = parse_numbers(center_csv);
        if (v.size() != 3) throw std::invalid_argument("--center needs x,y,z");
        cfg.initial_center = {v[0], v[1], v[2]};
    }

    const sw::ShrinkResult result =
        sw::run_shrink(*field, cfg, verbose ? &std::cerr : nullptr);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

    sw::TriangleMesh mesh = sw::anchor_grid_to_mesh(result.grid);
    const std::filesystem::path obj(out_path);
    const std::string mtl_name = obj.stem().string() + ".mtl";
    sw::write_checker_mtl((obj.parent_path() / mtl_name).string(), "checker.ppm");
    sw::save_obj(mesh, out_path, mtl_name);

    std::cout << "iterations " << result.history.size() << " residual "
              << (result.history.empty() ? 0.0 : result.history.back())
              << (result.converged ? " (converged)" : " (max iterations)")
              << "\n";
    return 0;
}

int cmd_mc(const std::string& grid_path, const std::string& out_path) {
    const sw::GridSdf grid = sw::GridSdf::load(grid_path);
    const sw::TriangleMesh mesh = sw::marching_cubes(grid);
    if (mesh.triangles.empty())
        std::cerr << "warning: no zero crossing, mesh is empty\n";
    sw::save_obj(mesh, out_path);
    std::cout << "vertices " << mesh.vertices.size() << " triangles "
              << mesh.triangles.size() << "\n";
    return 0;
}

int cmd_eval(const std::string& mesh_a, const std::string& mesh_b, int samples,
             std::uint64_t seed) {
    const sw::TriangleMesh a = sw::load_obj(mesh_a);
    const sw::TriangleMesh b = sw::load_obj(mesh_b);
    const auto sa = sw::sample_surface(a, samples, seed);
    const auto sb = sw::sample_surface(b, samples, seed + 1);
    sw::MetricsReport report;
    report.cd = sw::chamfer_distance(sa, sb);
    report.nc = sw::normal_consistency(sa, sb);
    report.samples_used = samples;
    report.seed = seed;
    std::cout << report.to_json() << "\n" << report.to_table();
    return 0;
}

int cmd_texture(const std::string& out_path, int cells) {
    sw::write_checkerboard_ppm(out_path, cells);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shrink-wrapped isosurface extraction toolkit"};
    app.require_subcommand(1);

    // ingest
    std::string in_mesh, out_grid;
    int resolution = 32;
    double padding = 0.1;
    int threads = 1;
    auto* ingest = app.add_subcommand("ingest", "sample a mesh into an SDF grid");
    ingest->add_option("mesh", in_mesh, "input OBJ")->required();
    ingest->add_option("out", out_grid, "output SDFGRID1 file")->required();
    ingest->add_option("--resolution", resolution, "grid resolution per axis");
    ingest->add_option("--padding", padding, "padding fraction of bbox diagonal");
    ingest->add_option("--threads", threads, "worker thread cap");

    // shrink
    std::string field_spec, out_obj, center_csv;
    sw::ShrinkConfig cfg;
    double radius = 0.0;
    bool verbose = false;
    std::string resample = "alternate";
    auto* shrink = app.add_subcommand("shrink", "contract a sphere onto a field");
    shrink->add_option("field", field_spec,
                       "grid/MLP file or sphere:R | box:hx,hy,hz[,r] | "
                       "capsule:ax,ay,az,bx,by,bz,R")
        ->required();
    shrink->add_option("out", out_obj, "output OBJ with UVs")->required();
    shrink->add_option("--ntheta", cfg.n_theta, "azimuthal resolution");
    shrink->add_option("--nphi", cfg.n_phi, "polar resolution");
    shrink->add_option("--step", cfg.step, "step size t");
    shrink->add_option("--tol", cfg.residual_tol, "residual tolerance");
    shrink->add_option("--max-iters", cfg.max_iters, "iteration cap");
    shrink->add_option("--resample", resample, "alternate|both|off");
    shrink->add_option("--radius", radius, "initial sphere radius");
    shrink->add_option("--center", center_csv, "initial sphere center x,y,z");
    shrink->add_option("--threads", cfg.threads, "worker thread cap");
    shrink->add_flag("--log", verbose, "stream per-iteration log to stderr");

    // mc
    std::string grid_path, mc_out;
    auto* mc = app.add_subcommand("mc", "marching cubes baseline");
    mc->add_option("grid", grid_path, "SDFGRID1 file")->required();
    mc->add_option("out", mc_out, "output OBJ")->required();

    // eval
    std::string mesh_a, mesh_b;
    int samples = 10000;
    std::uint64_t seed = 42;
    auto* eval = app.add_subcommand("eval", "compare two meshes (CD / NC)");
    eval->add_option("mesh_a", mesh_a)->required();
    eval->add_option("mesh_b", mesh_b)->required();
    eval->add_option("--samples", samples, "surface samples per mesh");
    eval->add_option("--seed", seed, "sampling seed");

    // texture
    std::string tex_out;
    int cells = 16;
    auto* texture = app.add_subcommand("texture", "write a checkerboard PPM");
    texture->add_option("out", tex_out, "output PPM path")->required();
    texture->add_option("--cells", cells, "squares per side (even)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ingest) {
            if (resolution < 8)
                throw std::invalid_argument("resolution must be >= 8");
            return cmd_ingest(in_mesh, out_grid, resolution, padding, threads);
        }
        if (*shrink) {
            if (resample == "alternate")
                cfg.resample_mode = sw::ResampleMode::Alternate;
            else if (resample == "both")
                cfg.resample_mode = sw::ResampleMode::Both;
            else if (resample == "off")
                cfg.resample_mode = sw::ResampleMode::Off;
            else
                throw std::invalid_argument("--resample must be alternate|both|off");
            return cmd_shrink(field_spec, out_obj, cfg, radius, center_csv,
                              verbose);
        }
        if (*mc) return cmd_mc(grid_path, mc_out);
        if (*eval) return cmd_eval(mesh_a, mesh_b, samples, seed);
        if (*texture) return cmd_texture(tex_out, cells);
    } catch (const sw::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "; residual tail:";
        for (double r : e.residual_tail) std::cerr << " " << r;
        std::cerr << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
