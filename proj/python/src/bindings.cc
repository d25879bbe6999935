// python/src/bindings.cc

// Copyright 2026  dysaug authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dysaug/align.h"
#include "dysaug/eval.h"
#include "dysaug/resample.h"
#include "dysaug/stft.h"
#include "dysaug/svd.h"

namespace py = pybind11;
using namespace dysaug;

namespace {

signal::Waveform waveform_from(py::array_t<double, py::array::c_style |
                                                       py::array::forcecast> a,
                               int sample_rate) {
  if (a.ndim() != 1) throw py::value_error("samples must be 1-D");
  signal::Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(a.data(), a.data() + a.size());
  return w;
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Mat mat_from(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  Mat m(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.v.begin());
  return m;
}

py::array_t<double> to_array2d(const Mat& m) {
  py::array_t<double> out({static_cast<py::ssize_t>(m.rows),
                           static_cast<py::ssize_t>(m.cols)});
  std::copy(m.v.begin(), m.v.end(), out.mutable_data());
  return out;
}

signal::StftParams stft_params(int window_len, int hop_len, int fft_len,
                               const std::string& window) {
  signal::StftParams p;
  p.window_len = window_len;
  p.hop_len = hop_len;
  p.fft_len = fft_len;
  p.window = window;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "dysarthric speech augmentation toolkit (core bindings)";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def(
      "resample_speed",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
         int sample_rate, double alpha) {
        return to_array(
            signal::resample_speed(waveform_from(x, sample_rate), alpha)
                .samples);
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("alpha"),
      "Speed perturbation y(t) = x(alpha t) by bandlimited interpolation.");

  m.def(
      "stft",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
         int sample_rate, int window_len, int hop_len, int fft_len,
         const std::string& window) {
        signal::ComplexSpectrogram c =
            signal::stft(waveform_from(x, sample_rate),
                         stft_params(window_len, hop_len, fft_len, window));
        py::array_t<std::complex<double>> out(
            {static_cast<py::ssize_t>(c.num_bins),
             static_cast<py::ssize_t>(c.num_frames)});
        std::copy(c.bins.begin(), c.bins.end(), out.mutable_data());
        return out;
      },
      py::arg("samples"), py::arg("sample_rate") = 16000,
      py::arg("window_len") = 400, py::arg("hop_len") = 160,
      py::arg("fft_len") = 512, py::arg("window") = "hann",
      "Complex STFT, rows are frequency bins.");

  m.def(
      "istft",
      [](py::array_t<std::complex<double>,
                     py::array::c_style | py::array::forcecast> bins,
         int sample_rate, int window_len, int hop_len, int fft_len,
         const std::string& window) {
        if (bins.ndim() != 2) throw py::value_error("bins must be 2-D");
        signal::ComplexSpectrogram c;
        c.num_bins = static_cast<int>(bins.shape(0));
        c.num_frames = static_cast<int>(bins.shape(1));
        c.params = stft_params(window_len, hop_len, fft_len, window);
        c.sample_rate = sample_rate;
        c.bins.assign(bins.data(), bins.data() + bins.size());
        return to_array(signal::istft(c).samples);
      },
      py::arg("bins"), py::arg("sample_rate") = 16000,
      py::arg("window_len") = 400, py::arg("hop_len") = 160,
      py::arg("fft_len") = 512, py::arg("window") = "hann",
      "Weighted overlap-add inverse STFT.");

  m.def(
      "griffin_lim",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> mag,
         int iters, int sample_rate, int window_len, int hop_len, int fft_len,
         const std::string& window) {
        signal::Spectrogram s;
        s.mag = mat_from(mag);
        s.params = stft_params(window_len, hop_len, fft_len, window);
        s.sample_rate = sample_rate;
        return to_array(signal::griffin_lim(s, iters).samples);
      },
      py::arg("magnitude"), py::arg("iters") = 60,
      py::arg("sample_rate") = 16000, py::arg("window_len") = 400,
      py::arg("hop_len") = 160, py::arg("fft_len") = 512,
      py::arg("window") = "hann", "Iterative phase reconstruction.");

  m.def(
      "svd_bases",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> spec,
         int k) {
        gan::SpectralBasis b = gan::svd_bases(mat_from(spec), k);
        return py::make_tuple(to_array2d(b.u), to_array(b.s), to_array2d(b.v));
      },
      py::arg("spectrogram"), py::arg("k"),
      "Leading k SVD factors (U, S, V) of a spectrogram.");

  m.def(
      "ctc_loss",
      [](py::array_t<double, py::array::c_style | py::array::forcecast>
             log_probs,
         const std::vector<int>& labels) {
        return eval::ctc_loss_value(mat_from(log_probs), labels);
      },
      py::arg("log_probs"), py::arg("labels"),
      "-log total alignment probability; log_probs is [T, V+1], blank = 0.");

  m.def(
      "greedy_decode",
      [](py::array_t<double, py::array::c_style | py::array::forcecast>
             log_probs) { return eval::greedy_decode(mat_from(log_probs)); },
      py::arg("log_probs"),
      "Per-frame argmax, collapse repeats, drop blanks.");

  m.def(
      "wer",
      [](const std::vector<std::string>& ref,
         const std::vector<std::string>& hyp) {
        eval::WerCounts c = eval::wer(ref, hyp);
        py::dict d;
        d["sub"] = c.sub;
        d["del"] = c.del;
        d["ins"] = c.ins;
        d["ref_len"] = c.ref_len;
        d["percent"] = c.percent();
        return d;
      },
      py::arg("ref"), py::arg("hyp"),
      "Word error rate via minimum edit distance.");

  m.def("sd_factor", &align::sd_factor, py::arg("l_control_mean"),
        py::arg("l_dys"),
        "Speaker-dependent perturbation factor l_control / l_dys.");
  m.def("pair_scale_factor", &align::pair_scale_factor, py::arg("control_dur"),
        py::arg("dys_dur"), "Per-pair duration-matching factor.");
}
