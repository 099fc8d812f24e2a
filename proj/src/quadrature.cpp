#include "noma/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <memory>
#include <stdexcept>

namespace noma {

namespace {

const bool kHandlerOff = [] {
  gsl_set_error_handler_off();
  return true;
}();

constexpr std::size_t kWorkspaceSize = 4096;

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
using Workspace = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;

double trampoline(double x, void* params) {
  return (*static_cast<const std::function<double(double)>*>(params))(x);
}

QuadResult run(const std::function<double(double)>& f, double a, double b,
               bool to_inf, double epsabs, double epsrel) {
  (void)kHandlerOff;
  Workspace ws(gsl_integration_workspace_alloc(kWorkspaceSize));
  if (!ws) throw std::runtime_error("quadrature: workspace allocation failed");
  gsl_function gf;
  gf.function = &trampoline;
  gf.params = const_cast<std::function<double(double)>*>(&f);
  QuadResult r;
  const int status =
      to_inf ? gsl_integration_qagiu(&gf, a, epsabs, epsrel, kWorkspaceSize,
                                     ws.get(), &r.value, &r.abs_error)
             : gsl_integration_qags(&gf, a, b, epsabs, epsrel, kWorkspaceSize,
                                    ws.get(), &r.value, &r.abs_error);
  // Roundoff/extrapolation warnings still return the best available
  // estimate together with an honest error bound; only hard failures throw.
  if (status != GSL_SUCCESS && status != GSL_EROUND && status != GSL_EMAXITER &&
      status != GSL_EDIVERGE && status != GSL_ESING) {
    throw std::runtime_error("quadrature: integration failed with status " +
                             std::to_string(status));
  }
  return r;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double epsabs, double epsrel) {
  return run(f, a, b, /*to_inf=*/false, epsabs, epsrel);
}

QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            double epsabs, double epsrel) {
  return run(f, a, 0.0, /*to_inf=*/true, epsabs, epsrel);
}

}  // namespace noma
