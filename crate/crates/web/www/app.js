// Built bindings live in ./pkg (see README: wasm-bindgen --target web).
import init, { spectra, subspace_curve, bound_curve } from "./pkg/tomo_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function status(msg) { $("status").textContent = msg || ""; }

// series: [{label, x, y, dash?}]; marks: x positions drawn as vertical lines
function plot(canvas, series, opts = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = { l: 58, r: 12, t: 10, b: 34 };
  ctx.clearRect(0, 0, w, h);
  const tf = opts.logY ? (v) => Math.log10(Math.max(v, 1e-12)) : (v) => v;
  const xs = series.flatMap((s) => s.x), ys = series.flatMap((s) => s.y.map(tf));
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (opts.yMin !== undefined) y0 = opts.yMin;
  if (y1 === y0) y1 = y0 + 1;
  const px = (x) => pad.l + ((x - x0) / (x1 - x0)) * (w - pad.l - pad.r);
  const py = (y) => h - pad.b - ((y - y0) / (y1 - y0)) * (h - pad.t - pad.b);

  ctx.strokeStyle = "#999"; ctx.fillStyle = "#444"; ctx.font = "12px sans-serif"; ctx.lineWidth = 1;
  ctx.strokeRect(pad.l, pad.t, w - pad.l - pad.r, h - pad.t - pad.b);
  for (let i = 0; i <= 4; i++) {
    const xv = x0 + ((x1 - x0) * i) / 4, yv = y0 + ((y1 - y0) * i) / 4;
    ctx.fillText(xv.toFixed(opts.xDigits ?? 1), px(xv) - 12, h - pad.b + 16);
    const label = opts.logY ? (10 ** yv).toPrecision(2) : yv.toFixed(2);
    ctx.fillText(label, 4, py(yv) + 4);
  }
  if (opts.xLabel) ctx.fillText(opts.xLabel, w / 2 - 20, h - 4);

  for (const m of opts.marks || []) {
    ctx.strokeStyle = "#bbb"; ctx.setLineDash([3, 3]);
    ctx.beginPath(); ctx.moveTo(px(m), pad.t); ctx.lineTo(px(m), h - pad.b); ctx.stroke();
  }
  series.forEach((s, i) => {
    ctx.strokeStyle = s.color || COLORS[i % COLORS.length];
    ctx.setLineDash(s.dash || []); ctx.lineWidth = 1.6;
    ctx.beginPath();
    s.x.forEach((x, j) => (j ? ctx.lineTo(px(x), py(tf(s.y[j]))) : ctx.moveTo(px(x), py(tf(s.y[j])))));
    ctx.stroke();
  });
  ctx.setLineDash([]);
}

function legend(el, series) {
  el.innerHTML = series
    .map((s, i) => `<span><i style="background:${s.color || COLORS[i % COLORS.length]}"></i>${s.label}</span>`)
    .join("");
}

function guarded(fn) {
  return () => {
    try { status(""); fn(); } catch (e) { status(String(e.message || e)); }
  };
}

function runSpectra() {
  const dumps = JSON.parse(spectra(num("sp-snr"), num("sp-alpha"), num("sp-looks"), $("sp-cov").value, num("sp-seed")));
  const series = dumps.map((d, i) => {
    // last iteration: the spectrum the final pick came from
    const s = d.spectra[d.spectra.length - 1];
    const peak = Math.max(...s);
    return {
      label: `${d.method} → ${d.estimated_elevations.map((e) => e.toFixed(1)).join(", ")} m`,
      x: d.elevations, y: s.map((v) => v / peak), color: COLORS[i],
    };
  });
  plot($("sp-plot"), series, { logY: true, marks: dumps[0].true_elevations, xLabel: "elevation (m)" });
  legend($("sp-legend"), [...series, { label: "true elevations (dashed)", color: "#bbb" }]);
}

function runSubspace() {
  const rows = JSON.parse(subspace_curve(num("sd-snr"), num("sd-alpha"), num("sd-trials"), 7));
  const byCov = new Map();
  for (const r of rows) {
    if (!byCov.has(r.covariance)) byCov.set(r.covariance, { label: r.covariance, x: [], y: [] });
    byCov.get(r.covariance).x.push(r.sweep_value);
    byCov.get(r.covariance).y.push(r.mean_subspace_distance);
  }
  const series = [...byCov.values()];
  plot($("sd-plot"), series, { xDigits: 0, xLabel: "looks L" });
  legend($("sd-legend"), series);
}

function runBounds() {
  const pts = JSON.parse(bound_curve(num("cb-snr"), num("cb-looks"), num("cb-n")));
  const x = pts.map((p) => p.alpha);
  const series = [
    { label: "two scatterers, √CRLB / ρs", x, y: pts.map((p) => p.double) },
    { label: "one scatterer", x, y: pts.map((p) => p.single), dash: [6, 4] },
  ];
  plot($("cb-plot"), series, { logY: true, xDigits: 2, xLabel: "separation α (Rayleigh cells)" });
  legend($("cb-legend"), series);
}

init().then(() => {
  status("");
  $("sp-run").onclick = guarded(runSpectra);
  $("sd-run").onclick = guarded(runSubspace);
  $("cb-run").onclick = guarded(runBounds);
  guarded(runSpectra)();
  guarded(runBounds)();
}, (e) => status(`failed to load the WebAssembly module: ${e}`));
