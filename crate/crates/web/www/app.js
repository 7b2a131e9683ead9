import init, { machines, run_machine, zone_curves, repeat_curves, lz_phrases } from "./pkg/pdlab_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

function escape(s) {
  return String(s).replace(/[&<>]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;" })[c]);
}

function showError(target, e) {
  target.innerHTML = `<p class="err">${escape(e)}</p>`;
}

// Axes plus one polyline per series; points are [x, y] pairs.
function plot(canvas, series, { yMax, xLabel, yLabel, marks = [] }) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 70;
  ctx.clearRect(0, 0, W, H);
  ctx.font = "22px system-ui";
  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const xMax = Math.max(1, ...xs);
  const top = yMax ?? Math.max(1e-9, ...series.flatMap((s) => s.points.map((p) => p[1]))) * 1.05;
  const px = (x) => pad + (x / xMax) * (W - 2 * pad);
  const py = (y) => H - pad - (y / top) * (H - 2 * pad);

  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, H - pad);
  ctx.lineTo(W - pad / 2, H - pad);
  ctx.stroke();
  ctx.fillStyle = "#444";
  for (let i = 0; i <= 4; i++) {
    const y = (top * i) / 4;
    ctx.fillText(y.toFixed(top < 10 ? 2 : 0), 4, py(y) + 7);
  }
  ctx.fillText(`${xLabel} (max ${xMax})`, W / 2 - 80, H - 18);
  ctx.fillText(yLabel, pad + 8, pad / 2 + 4);

  ctx.strokeStyle = "#ddd";
  for (const m of marks) {
    ctx.beginPath();
    ctx.moveTo(px(m), pad / 2);
    ctx.lineTo(px(m), H - pad);
    ctx.stroke();
  }
  series.forEach((s, i) => {
    ctx.strokeStyle = COLORS[i % COLORS.length];
    ctx.lineWidth = 3;
    ctx.beginPath();
    s.points.forEach(([x, y], j) => (j ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y))));
    ctx.stroke();
  });
  ctx.lineWidth = 1;
}

function runMachine() {
  const out = $("run-out");
  try {
    const source = $("run-custom").checked ? $("run-text").value : $("run-machine").value;
    const v = JSON.parse(run_machine(source, $("run-word").value));
    out.innerHTML =
      `<p>output <code>${escape(v.output) || "(empty)"}</code> &middot; final state <code>${escape(v.final_state)}</code>` +
      ` &middot; stack <code>${escape(v.stack)}</code> (bottom first)</p>` +
      `<pre>${v.steps.map((s, i) => `${String(i).padStart(3)} ${s.symbol || " "} -> ${s.state} h=${s.height} out=${s.output}`).join("\n")}</pre>`;
    plot($("run-plot"), [{ points: v.steps.map((s, i) => [i, s.height]) }], {
      xLabel: "symbols read",
      yLabel: "stack height",
    });
  } catch (e) {
    showError(out, e);
  }
}

function showCurves(json) {
  const v = JSON.parse(json);
  $("curve-legend").innerHTML = v.curves
    .map((c, i) => {
      const last = c.points[c.points.length - 1];
      return `<span style="color:${COLORS[i % COLORS.length]}">&#9632; ${escape(c.name)} (final ${last[1].toFixed(3)})</span>`;
    })
    .join("");
  const flagEnds = v.markers.filter((m) => /^S\d+:F[1-9]/.test(m.label)).map((m) => m.position);
  plot($("curve-plot"), v.curves, { yMax: 1.6, xLabel: "prefix length", yLabel: "ratio", marks: flagEnds });
  $("curve-out").innerHTML = flagEnds.length ? "<p>Grey lines mark the ends of flags that follow an X zone.</p>" : "";
}

function zoneCurves() {
  try {
    showCurves(zone_curves(+$("z-k").value, +$("z-v").value, +$("z-vp").value, +$("z-n").value));
  } catch (e) {
    showError($("curve-out"), e);
  }
}

function repeatCurves() {
  try {
    showCurves(repeat_curves($("r-machine").value, $("r-t").value, $("r-u").value, +$("r-n").value));
  } catch (e) {
    showError($("curve-out"), e);
  }
}

function lzParse() {
  const out = $("lz-out");
  try {
    const v = JSON.parse(lz_phrases($("lz-word").value, $("lz-alpha").value));
    const rows = v.phrases
      .map((p) => `<tr><td>${p.index}</td><td class="mono">${escape(p.text)}</td><td>${p.back_ref}</td><td class="mono">${p.literal === null ? "(none)" : escape(p.literal)}</td></tr>`)
      .join("");
    out.innerHTML =
      `<p>${v.phrases.length} phrases, ${v.bits} bits, ratio ${v.ratio.toFixed(3)}</p>` +
      `<pre>${v.code}</pre>` +
      `<table><tr><th>#</th><th>phrase</th><th>back-ref</th><th>literal</th></tr>${rows}</table>`;
  } catch (e) {
    showError(out, e);
  }
}

await init();
for (const m of JSON.parse(machines())) {
  for (const sel of [$("run-machine"), $("r-machine")]) {
    sel.add(new Option(`${m.name} (${m.mode}, ${m.states} states)`, m.name));
  }
}
$("run-machine").value = "walker";
$("r-machine").value = "walker";
$("run-custom").onchange = () => ($("run-text").hidden = !$("run-custom").checked);
$("run-go").onclick = runMachine;
$("z-go").onclick = zoneCurves;
$("r-go").onclick = repeatCurves;
$("lz-go").onclick = lzParse;
runMachine();
zoneCurves();
lzParse();
