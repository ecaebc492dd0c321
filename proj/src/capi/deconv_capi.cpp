#include "deconv/deconv.h"

#include "core/commands.hpp"
#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/runner.hpp"
#include "core/scenarios.hpp"

#include <exception>
#include <new>
#include <string>

struct dcv_samples
{
  deconv::SampleSet set;
};

struct dcv_estimate
{
  deconv::EstimateResult result;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_message;

template<class F>
dcv_status
guarded(F&& f)
{
  try {
    last_error.clear();
    f();
    return DCV_OK;
  } catch (const deconv::ConfigError& e) {
    last_error = e.what();
    return DCV_ERR_CONFIG;
  } catch (const deconv::NumericalError& e) {
    last_error = e.what();
    return DCV_ERR_NUMERICAL;
  } catch (const deconv::IoError& e) {
    last_error = e.what();
    return DCV_ERR_IO;
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return DCV_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DCV_ERR_NUMERICAL;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return DCV_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DCV_ERR_NUMERICAL;
  }
}

dcv_status
null_arg(const char* what)
{
  last_error = std::string("null argument: ") + what;
  return DCV_ERR_INVALID_ARGUMENT;
}

nlohmann::json
object_or_empty(const char* text)
{
  if (!text || !*text)
    return nlohmann::json::object();
  return deconv::parse_json_text(text);
}

} // namespace

extern "C" {

const char*
dcv_version(void)
{
  return "0.1.0";
}

const char*
dcv_last_error(void)
{
  return last_error.c_str();
}

const char*
dcv_last_message(void)
{
  return last_message.c_str();
}

dcv_status
dcv_samples_simulate(const char* scenario_json, size_t n, uint64_t seed, dcv_samples** out)
{
  if (!scenario_json)
    return null_arg("scenario_json");
  if (!out)
    return null_arg("out");
  return guarded([&] {
    const auto j = deconv::parse_json_text(scenario_json);
    deconv::ConfigObject obj(j, "scenario");
    const deconv::Scenario sc(deconv::parse_scenario(obj));
    *out = new dcv_samples{ sc.sample(n, seed) };
  });
}

dcv_status
dcv_samples_from_array(int d1, int d2, const double* data, size_t n, dcv_samples** out)
{
  if (!out)
    return null_arg("out");
  if (!data && n > 0)
    return null_arg("data");
  return guarded([&] {
    if (d1 < 1 || d2 < 1)
      throw std::invalid_argument("block dimensions must be positive");
    const size_t len = n * size_t(d1 + d2);
    *out = new dcv_samples{ deconv::SampleSet({ d1, d2 }, std::vector<double>(data, data + len)) };
  });
}

dcv_status
dcv_samples_read_csv(const char* path, int d1, int d2, dcv_samples** out)
{
  if (!path)
    return null_arg("path");
  if (!out)
    return null_arg("out");
  return guarded([&] { *out = new dcv_samples{ deconv::read_samples_csv(path, { d1, d2 }) }; });
}

dcv_status
dcv_samples_write_csv(const dcv_samples* s, const char* path)
{
  if (!s)
    return null_arg("samples");
  if (!path)
    return null_arg("path");
  return guarded([&] { deconv::write_samples_csv(std::string(path), s->set); });
}

size_t
dcv_samples_count(const dcv_samples* s)
{
  return s ? s->set.size() : 0;
}

int
dcv_samples_dim(const dcv_samples* s)
{
  return s ? s->set.dim() : 0;
}

const double*
dcv_samples_data(const dcv_samples* s)
{
  return s ? s->set.data().data() : nullptr;
}

void
dcv_samples_free(dcv_samples* s)
{
  delete s;
}

dcv_status
dcv_estimate_run(const dcv_samples* s, const char* estimator_json, double kappa, uint64_t seed,
                 dcv_estimate** out)
{
  if (!s)
    return null_arg("samples");
  if (!out)
    return null_arg("out");
  return guarded([&] {
    const auto j = object_or_empty(estimator_json);
    deconv::ConfigObject obj(j, "estimator");
    const auto settings = deconv::parse_estimator(obj);
    *out = new dcv_estimate{ deconv::estimate_at(s->set, settings, kappa, seed) };
  });
}

double
dcv_estimate_kappa(const dcv_estimate* e)
{
  return e ? e->result.kappa : 0.0;
}

double
dcv_estimate_contrast(const dcv_estimate* e)
{
  return e ? e->result.contrast : 0.0;
}

int
dcv_estimate_m(const dcv_estimate* e)
{
  return e ? e->result.tuning.m : 0;
}

double
dcv_estimate_omega(const dcv_estimate* e)
{
  return e ? e->result.tuning.omega : 0.0;
}

int
dcv_estimate_dim(const dcv_estimate* e)
{
  return e ? e->result.phi.dims().total() : 0;
}

dcv_status
dcv_estimate_cf_at(const dcv_estimate* e, const double* t, double* re, double* im)
{
  if (!e)
    return null_arg("estimate");
  if (!t || !re || !im)
    return null_arg("t/re/im");
  return guarded([&] {
    const auto v = e->result.phi.evaluate({ t, size_t(dcv_estimate_dim(e)) });
    *re = v.real();
    *im = v.imag();
  });
}

dcv_status
dcv_estimate_density_at(const dcv_estimate* e, const double* x, double* value)
{
  if (!e)
    return null_arg("estimate");
  if (!x || !value)
    return null_arg("x/value");
  return guarded([&] {
    const auto& sp = e->result.spectral;
    *value = deconv::invert_at(sp.poly, sp.omega, { x, size_t(dcv_estimate_dim(e)) });
  });
}

void
dcv_estimate_free(dcv_estimate* e)
{
  delete e;
}

dcv_status
dcv_run_command(const char* name, const char* config_json, const char* out_dir,
                size_t* violations)
{
  if (!name)
    return null_arg("name");
  if (!config_json)
    return null_arg("config_json");
  if (!out_dir)
    return null_arg("out_dir");
  return guarded([&] {
    const auto j = deconv::parse_json_text(config_json);
    const auto outcome = deconv::run_command(name, j, out_dir);
    last_message = outcome.message;
    if (violations)
      *violations = outcome.violations;
  });
}

} // extern "C"
