// Walks through the four arithmetic gadgets and F[x^2 - 2], printing every
// point of each arrangement, and writes the two F[x^2 - 2] drawings as SVG.
//
//   demo_gadgets [outdir]

#include <iostream>
#include <string>

#include "projuniq/projuniq.hpp"

using namespace projuniq;

static void show(const std::string& title, const FunctionalArrangement& fa) {
  std::cout << title << " = " << fa.value << "   (" << fa.config.size() << " points, "
            << fa.certificate.steps.size() << " derivation steps)\n";
  for (const auto& [l, p] : fa.config.points()) std::cout << "    " << l << " = (" << p[0] << ", " << p[1] << ")\n";
  const auto chk = check_certificate(fa.config, fa.certificate);
  std::cout << "    certificate " << (chk ? "replays" : "FAILS: " + chk.reason) << "\n";
}

int main(int argc, char** argv) {
  const std::string outdir = argc > 1 ? argv[1] : ".";
  const Scalar a(Rational(3, 2)), b(Rational(-2, 5));
  show("ADD(3/2, -2/5)", add_gadget(a, b));
  show("MLT(3/2, -2/5)", mlt_gadget(a, b));
  show("SUB(3/2, -2/5)", sub_gadget(a, b));
  show("DIV(3/2, -2/5)", div_gadget(a, b));

  // F[x^2 - 2] at a rational point and at its root in Q(sqrt 2).
  const IntPolynomial psi = io::parse_polynomial("x^2 - 2");
  const ArrangementTemplate t = compile_polynomial(psi);
  const FunctionalArrangement at3 = instantiate(t, {Scalar(3)});
  const FunctionalArrangement at_root = instantiate(t, {io::parse_value("sqrt2")});
  show("F[x^2-2](3)", at3);
  show("F[x^2-2](sqrt2)", at_root);

  for (const auto& [name, fa] : {std::pair{"f_at_3", &at3}, std::pair{"f_at_sqrt2", &at_root}}) {
    const io::Roles roles{
        {"input", fa->input_labels}, {"grid", fa->grid_labels}, {"aux", fa->aux_labels}, {"output", {fa->output_label}}};
    const std::string path = outdir + "/" + name + ".svg";
    io::write_text(path, io::render_svg(fa->config, roles, fa->certificate));
    std::cout << "wrote " << path << "\n";
  }
}
