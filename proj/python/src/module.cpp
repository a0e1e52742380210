#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "isconv/bench.hpp"
#include "isconv/errors.hpp"
#include "isconv/gemm_conv.hpp"
#include "isconv/isc.hpp"
#include "isconv/macs.hpp"
#include "isconv/reference.hpp"

namespace py = pybind11;
using namespace isconv;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

std::vector<float> copy_of(const FloatArray& a, int ndim, const char* what) {
  if (a.ndim() != ndim) {
    throw ShapeError(std::string(what) + " must have " + std::to_string(ndim) + " dimensions");
  }
  return std::vector<float>(a.data(), a.data() + a.size());
}

Tensor3 to_tensor(const FloatArray& a) {
  auto data = copy_of(a, 3, "input");
  return Tensor3(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                 static_cast<int>(a.shape(2)), std::move(data));
}

Kernel4 to_kernel(const FloatArray& a) {
  auto data = copy_of(a, 4, "kernel");
  return Kernel4(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                 static_cast<int>(a.shape(2)), static_cast<int>(a.shape(3)), std::move(data));
}

py::array_t<float> to_array(const Tensor3& t) {
  py::array_t<float> out({t.C(), t.H(), t.W()});
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

py::array_t<float> to_array(const Kernel4& w) {
  py::array_t<float> out({w.K(), w.C(), w.R(), w.S()});
  std::copy(w.data().begin(), w.data().end(), out.mutable_data());
  return out;
}

template <class F>
auto unlocked(F&& f) {
  py::gil_scoped_release release;
  return f();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Direct, im2col+GEMM and inverse sparse convolution kernels";

  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<CorrectnessError>(m, "CorrectnessError", PyExc_RuntimeError);
  py::register_exception<MeasurementError>(m, "MeasurementError", PyExc_RuntimeError);

  py::class_<ConvParams>(m, "ConvParams")
      .def(py::init([](int C, int H_in, int W_in, int K, int R, int S, int P, int T) {
             ConvParams p{C, H_in, W_in, K, R, S, P, T};
             p.validate();
             return p;
           }),
           py::arg("C"), py::arg("H_in"), py::arg("W_in"), py::arg("K"), py::arg("R"),
           py::arg("S"), py::arg("P") = 0, py::arg("T") = 1)
      .def_readonly("C", &ConvParams::C)
      .def_readonly("H_in", &ConvParams::H_in)
      .def_readonly("W_in", &ConvParams::W_in)
      .def_readonly("K", &ConvParams::K)
      .def_readonly("R", &ConvParams::R)
      .def_readonly("S", &ConvParams::S)
      .def_readonly("P", &ConvParams::P)
      .def_readonly("T", &ConvParams::T)
      .def(py::self == py::self)
      .def("__repr__", &ConvParams::to_string);

  m.def("output_dims", [](const ConvParams& p) {
    const auto d = output_dims(p);
    return py::make_tuple(d.H_out, d.W_out);
  });

  m.def(
      "direct_conv",
      [](const FloatArray& input, const FloatArray& kernel, const ConvParams& p, int threads) {
        const Tensor3 in = to_tensor(input);
        const Kernel4 w = to_kernel(kernel);
        return to_array(unlocked([&] { return direct_conv(in, w, p, threads); }));
      },
      py::arg("input"), py::arg("kernel"), py::arg("params"), py::arg("threads") = 1);

  m.def(
      "gemm_conv",
      [](const FloatArray& input, const FloatArray& kernel, const ConvParams& p, int threads) {
        const Tensor3 in = to_tensor(input);
        const Kernel4 w = to_kernel(kernel);
        return to_array(unlocked([&] { return gemm_conv(in, w, p, threads); }));
      },
      py::arg("input"), py::arg("kernel"), py::arg("params"), py::arg("threads") = 1);

  py::class_<IscCounters>(m, "IscCounters")
      .def_readonly("macs", &IscCounters::macs)
      .def_readonly("zero_init_writes", &IscCounters::zero_init_writes)
      .def_readonly("output_writes", &IscCounters::output_writes);

  // Compress and pack inside the call; the counters are returned alongside
  // the output when asked for.
  m.def(
      "isc_conv",
      [](const FloatArray& input, const FloatArray& kernel, const ConvParams& p, int threads,
         bool with_counters) -> py::object {
        const Tensor3 in = to_tensor(input);
        const Kernel4 w = to_kernel(kernel);
        IscCounters counters;
        const Tensor3 out = unlocked([&] {
          check_shapes(in, w, p);
          return isc_conv(compress(in), pack_kernel(w), p, &counters, threads);
        });
        if (with_counters) return py::make_tuple(to_array(out), counters);
        return to_array(out);
      },
      py::arg("input"), py::arg("kernel"), py::arg("params"), py::arg("threads") = 1,
      py::arg("with_counters") = false);

  m.def("relu", [](const FloatArray& t) { return to_array(relu(to_tensor(t))); });
  m.def("measure_sparsity", [](const FloatArray& t) { return measure_sparsity(to_tensor(t)); });

  py::class_<SparseInput>(m, "SparseInput")
      .def_property_readonly("shape",
                             [](const SparseInput& s) { return py::make_tuple(s.C(), s.H(), s.W()); })
      .def_property_readonly("nnz", &SparseInput::nnz)
      .def_property_readonly("coords",
                             [](const SparseInput& s) {
                               py::array_t<int> out({static_cast<py::ssize_t>(s.nnz()), py::ssize_t{3}});
                               int* d = out.mutable_data();
                               for (const auto& e : s.entries()) {
                                 *d++ = e.c;
                                 *d++ = e.i;
                                 *d++ = e.j;
                               }
                               return out;
                             })
      .def_property_readonly("values",
                             [](const SparseInput& s) {
                               py::array_t<float> out(static_cast<py::ssize_t>(s.nnz()));
                               float* d = out.mutable_data();
                               for (const auto& e : s.entries()) *d++ = e.value;
                               return out;
                             })
      .def("decompress", [](const SparseInput& s) { return to_array(decompress(s)); });

  m.def("compress", [](const FloatArray& t) { return compress(to_tensor(t)); });

  m.def("dense_macs", &dense_macs);
  m.def("effective_macs", [](const FloatArray& input, const ConvParams& p) {
    const Tensor3 in = to_tensor(input);
    check_input_shape(in, p);
    const auto macs = effective_macs(compress(in), p);
    return py::dict(py::arg("exact") = macs.exact, py::arg("estimated") = macs.estimated);
  });

  m.def(
      "gen_sparse_input",
      [](std::uint64_t seed, const ConvParams& p, double sparsity) {
        return to_array(bench::gen_sparse_input(seed, p, sparsity));
      },
      py::arg("seed"), py::arg("params"), py::arg("sparsity"));
  m.def(
      "gen_kernel",
      [](std::uint64_t seed, const ConvParams& p) { return to_array(bench::gen_kernel(seed, p)); },
      py::arg("seed"), py::arg("params"));

  py::class_<bench::LayerSpec>(m, "LayerSpec")
      .def_readonly("name", &bench::LayerSpec::name)
      .def_readonly("params", &bench::LayerSpec::params)
      .def_readonly("sparsity", &bench::LayerSpec::sparsity)
      .def("__repr__", [](const bench::LayerSpec& s) {
        return "LayerSpec(" + s.name + ", " + s.params.to_string() + ", sparsity=" +
               std::to_string(s.sparsity) + ")";
      });

  m.def("parse_layer_specs", [](const std::string& text) { return bench::parse_layer_specs(text); });
  m.def("default_layer_specs", &bench::default_layer_specs);

  // Returns the CSV report the bench CLI would print.
  m.def(
      "run_suite",
      [](const std::vector<bench::LayerSpec>& specs, const std::string& algos, int reps,
         int warmups, std::uint64_t seed, int threads, bool verify_only) {
        const auto list = bench::parse_algo_list(algos);
        const bench::RunOptions opts{reps, warmups, seed, threads};
        return unlocked([&] { return bench::to_csv(bench::run_suite(specs, list, opts, verify_only)); });
      },
      py::arg("specs"), py::arg("algos") = "direct,gemm,isc", py::arg("reps") = 30,
      py::arg("warmups") = 3, py::arg("seed") = 42, py::arg("threads") = 1,
      py::arg("verify_only") = false);
}
