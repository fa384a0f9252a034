#include "anderson/geometry.hpp"
#include "anderson/harness.hpp"
#include "anderson/model.hpp"
#include "anderson/msa.hpp"
#include "anderson/spectral.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace anderson;

namespace {

Configuration to_config(const std::vector<std::vector<int>>& particles)
{
    if (particles.empty())
        throw std::invalid_argument("configuration needs at least one particle");
    const int d = static_cast<int>(particles.front().size());
    std::vector<int> coords;
    for (const auto& p : particles) {
        if (static_cast<int>(p.size()) != d)
            throw std::invalid_argument("all particles need the same dimension");
        coords.insert(coords.end(), p.begin(), p.end());
    }
    return Configuration(d, std::move(coords));
}

py::dict result_dict(const ResultRecord& r)
{
    py::dict d;
    d["kind"] = r.kind;
    d["config_hash"] = r.config_hash;
    d["content_id"] = r.content_id;
    d["header"] = r.header;
    d["rows"] = r.rows;
    d["summary"] = r.summary.dump();
    d["notes"] = r.notes;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Multi-particle Anderson model lab";

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def_readwrite("particles", &ModelSpec::particles)
        .def_readwrite("dim", &ModelSpec::dim)
        .def_readwrite("interaction_amplitude", &ModelSpec::interaction_amplitude)
        .def_readwrite("interaction_exponent", &ModelSpec::interaction_exponent)
        .def_readwrite("disorder_coupling", &ModelSpec::disorder_coupling)
        .def_readwrite("amplitude_support", &ModelSpec::amplitude_support)
        .def_readwrite("energy_window", &ModelSpec::energy_window);

    py::class_<ScaleParams>(m, "ScaleParams")
        .def(py::init<>())
        .def_readwrite("max_particles", &ScaleParams::max_particles)
        .def_readwrite("initial_scale", &ScaleParams::initial_scale)
        .def_readwrite("growth", &ScaleParams::growth)
        .def_readwrite("kappa", &ScaleParams::kappa)
        .def_readwrite("beta", &ScaleParams::beta)
        .def_readwrite("delta", &ScaleParams::delta)
        .def_readwrite("zeta", &ScaleParams::zeta)
        .def_readwrite("mass", &ScaleParams::mass)
        .def_readwrite("nu", &ScaleParams::nu)
        .def_readwrite("energy_window", &ScaleParams::energy_window);

    // Configurations are lists of particle positions, e.g. [[0], [10]].
    m.def("sym_distance", [](const std::vector<std::vector<int>>& x, const std::vector<std::vector<int>>& y) {
        return sym_distance(to_config(x), to_config(y));
    });
    m.def("hausdorff_distance", [](const std::vector<std::vector<int>>& x, const std::vector<std::vector<int>>& y) {
        return hausdorff_distance(to_config(x), to_config(y));
    });

    m.def(
        "hamiltonian",
        [](const std::vector<std::vector<int>>& center, int radius, std::uint64_t seed, const ModelSpec& spec) {
            const Cube cube(to_config(center), radius);
            auto sample = sample_disorder(cube.projection_sites(), seed, spec);
            return Eigen::MatrixXd(assemble_hamiltonian(cube, sample, spec).dense());
        },
        py::arg("center"), py::arg("radius"), py::arg("seed"), py::arg("spec") = ModelSpec{},
        "Dense H on the lattice cube of the given center and radius, disorder keyed by seed.");
    m.def("eigenvalues", [](const Eigen::MatrixXd& h) { return Eigen::VectorXd(eigenvalues(h)); });
    m.def(
        "efc_kernel",
        [](const Eigen::MatrixXd& h, std::size_t src, std::size_t dst, double lo, double hi) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
            SpectralData sd{es.eigenvalues(), es.eigenvectors()};
            return efc_kernel(sd, src, dst, lo, hi);
        },
        py::arg("h"), py::arg("src"), py::arg("dst"), py::arg("lo"), py::arg("hi"));
    m.def("gri_lattice_bound", &gri_lattice_bound);
    m.def("minimal_growth", &minimal_growth);
    m.def("validate_params", [](const ScaleParams& p) {
        const auto r = validate_params(p);
        py::dict d;
        d["ok"] = r.ok();
        d["failures"] = r.failures();
        d["masses"] = r.masses;
        d["nus"] = r.nus;
        d["minimal_growth"] = r.minimal_growth;
        return d;
    });

    m.def("experiment_kinds", &experiment_kinds);
    m.def("run_experiment", [](const std::string& config_json) {
        auto config = parse_config(nlohmann::json::parse(config_json));
        ResultRecord r;
        {
            py::gil_scoped_release release;
            r = run(config);
        }
        return result_dict(r);
    });
    m.def("report", [](const std::vector<std::string>& files, const std::string& out_dir) {
        std::vector<std::filesystem::path> paths(files.begin(), files.end());
        py::list out;
        for (const auto& l : report(paths, out_dir)) {
            py::dict d;
            d["file"] = l.file;
            d["kind"] = l.kind;
            d["metric"] = l.metric;
            d["value"] = l.value;
            d["criterion"] = l.criterion;
            d["pass"] = l.pass;
            out.append(d);
        }
        return out;
    });
    m.def("sha1_hex", [](const py::bytes& b) { return sha1_hex(std::string(b)); });
    m.def("git_blob_id", [](const py::bytes& b) { return git_blob_id(std::string(b)); });

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
}
