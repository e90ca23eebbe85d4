#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mac2pc/aes_circuit.hpp"
#include "mac2pc/bucket.hpp"
#include "mac2pc/circuit.hpp"
#include "mac2pc/leakage.hpp"
#include "mac2pc/local.hpp"

namespace py = pybind11;
using namespace mac2pc;

namespace {

BitVec to_bitvec(const std::vector<int>& bits) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw UsageError("bits must be 0 or 1");
    v.set(i, bits[i] == 1);
  }
  return v;
}

std::vector<int> to_list(const BitVec& v) {
  std::vector<int> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v.get(i);
  return out;
}

py::dict stats_dict(const RuntimeStats& s) {
  py::dict d;
  d["and_gates"] = s.and_gates;
  d["free_gates"] = s.free_gates;
  d["announced_bits"] = s.announced_bits;
  d["revealed_bits"] = s.revealed_bits;
  d["opened_bits"] = s.opened_bits;
  d["reveal_rounds"] = s.reveal_rounds;
  d["flushes"] = s.flushes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-party computation from authenticated bits: local simulation and analysis helpers.";

  // UsageError derives from std::invalid_argument and arrives as ValueError.
  py::register_exception<ProtocolAbort>(m, "ProtocolAbort", PyExc_RuntimeError);
  py::register_exception<OutOfMaterial>(m, "OutOfMaterial", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Circuit>(m, "Circuit")
      .def_property_readonly("n_gates", [](const Circuit& c) { return c.gates().size(); })
      .def_property_readonly("n_wires", [](const Circuit& c) { return c.header().n_wires; })
      .def_property_readonly("and_count", &Circuit::and_count)
      .def_property_readonly("xor_count", &Circuit::xor_count)
      .def_property_readonly("and_depth", &Circuit::and_depth)
      .def_property_readonly("inputs_alice", [](const Circuit& c) { return c.header().inputs_of(Role::Alice); })
      .def_property_readonly("inputs_bob", [](const Circuit& c) { return c.header().inputs_of(Role::Bob); })
      .def_property_readonly("n_outputs", [](const Circuit& c) { return c.header().total_outputs(); })
      .def("to_bristol", [](const Circuit& c) { return to_bristol(c); })
      .def("__repr__", [](const Circuit& c) {
        return "<Circuit gates=" + std::to_string(c.gates().size()) + " and=" + std::to_string(c.and_count()) + ">";
      });

  m.def("parse_bristol", [](const std::string& text) { return parse_bristol_string(text); }, py::arg("text"),
        "Parses a Bristol Fashion circuit.");
  m.def("load_bristol", &parse_bristol_file, py::arg("path"));
  m.def("aes128_circuit", &aes128_circuit, py::arg("shared_key") = false,
        "AES-128 encryption; Alice inputs the key (or her key share), Bob the plaintext (and his key share).");
  m.def(
      "random_circuit",
      [](std::uint64_t seed, std::size_t inputs_alice, std::size_t inputs_bob, std::size_t n_gates,
         std::size_t n_outputs) {
        Rng rng(seed);
        return random_circuit(rng, inputs_alice, inputs_bob, n_gates, n_outputs);
      },
      py::arg("seed"), py::arg("inputs_alice"), py::arg("inputs_bob"), py::arg("n_gates"), py::arg("n_outputs"));

  m.def(
      "plain_eval",
      [](const Circuit& c, const std::vector<int>& a, const std::vector<int>& b) {
        return to_list(plain_eval(c, to_bitvec(a), to_bitvec(b)));
      },
      py::arg("circuit"), py::arg("inputs_alice"), py::arg("inputs_bob"), "Cleartext evaluation.");

  m.def(
      "run_local",
      [](const Circuit& c, const std::vector<int>& a, const std::vector<int>& b, unsigned kappa, unsigned psi,
         std::uint64_t seed, std::optional<std::size_t> bucket) {
        LocalRun r;
        {
          py::gil_scoped_release release;
          r = run_local(c, to_bitvec(a), to_bitvec(b), {kappa, psi}, seed, bucket);
        }
        py::dict d;
        d["out_alice"] = to_list(r.eval.out_alice);
        d["out_bob"] = to_list(r.eval.out_bob);
        d["deal_seconds"] = r.deal.seconds;
        d["deal_bytes"] = r.deal.bytes;
        d["online_seconds"] = r.eval.seconds;
        d["online_bytes"] = r.eval.bytes;
        d["stats_alice"] = stats_dict(r.eval.stats_alice);
        d["stats_bob"] = stats_dict(r.eval.stats_bob);
        return d;
      },
      py::arg("circuit"), py::arg("inputs_alice"), py::arg("inputs_bob"), py::arg("kappa") = 128,
      py::arg("psi") = 40, py::arg("seed") = 0, py::arg("bucket") = py::none(),
      "Runs the dealer and the online phase for both parties in this process.");

  m.def("bucket_size_for", &bucket_size_for, py::arg("ell"), py::arg("psi"));
  m.def("log2_alpha_prime", &log2_alpha_prime, py::arg("bucket"), py::arg("ell"));
  m.def("bucket_fail_prob", &bucket_fail_prob, py::arg("gamma"), py::arg("ell"), py::arg("bucket"));
  m.def("span_fail_exact", &span_fail_exact, py::arg("psi"), py::arg("n"));
  m.def(
      "verify_bounds",
      [](std::size_t trials, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<BoundCheck> checks;
        {
          py::gil_scoped_release release;
          checks = verify_bounds(trials, rng);
        }
        py::list out;
        for (const auto& c : checks) {
          py::dict d;
          d["name"] = c.name;
          d["measured"] = c.measured;
          d["reference"] = c.reference;
          d["tolerance"] = c.tolerance;
          d["pass"] = c.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("trials") = 20000, py::arg("seed") = 0);
}
