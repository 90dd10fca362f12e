import init, { CookDemo, material_curve, basis_field } from "./pkg/hwforms_web.js";

const $ = (id) => document.getElementById(id);

function fitTransform(canvas, xs, ys, pad = 20) {
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const s = Math.min((canvas.width - 2 * pad) / (x1 - x0 || 1), (canvas.height - 2 * pad) / (y1 - y0 || 1));
  return (x, y) => [pad + (x - x0) * s, canvas.height - pad - (y - y0) * s];
}

let cook = null;

function drawCook() {
  const canvas = $("cook-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!cook) return;
  const p = cook.positions();
  const e = cook.edges();
  // View the x-z plane; the mesh is one element thick along y.
  const xs = [0, 48, 60], zs = [-5, 75];
  const map = fitTransform(canvas, xs, zs);
  ctx.strokeStyle = "#2a6fb0";
  ctx.lineWidth = 0.6;
  ctx.beginPath();
  for (let k = 0; k < e.length; k += 2) {
    const a = e[k], b = e[k + 1];
    const [ax, ay] = map(p[3 * a], p[3 * a + 2]);
    const [bx, by] = map(p[3 * b], p[3 * b + 2]);
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
  }
  ctx.stroke();
  const r = cook.residuals();
  $("cook-out").textContent =
    `unknowns ${cook.unknowns()}  load factor ${cook.load_factor().toFixed(3)}  tip u_z ${cook.tip_displacement().toFixed(4)}  min J ${cook.min_jacobian().toFixed(4)}\n` +
    (r.length ? `Newton residuals: ${Array.from(r, (v) => v.toExponential(2)).join("  ")}` : "");
}

function buildCook() {
  try {
    cook = new CookDemo(+$("cook-n").value, +$("cook-steps").value, +$("cook-traction").value);
  } catch (err) {
    cook = null;
    $("cook-out").textContent = String(err);
  }
  drawCook();
}

function stepCook() {
  if (!cook) return false;
  try {
    const more = cook.step();
    drawCook();
    return more;
  } catch (err) {
    $("cook-out").textContent = String(err);
    return false;
  }
}

function runCook() {
  const tick = () => { if (stepCook()) requestAnimationFrame(tick); };
  requestAnimationFrame(tick);
}

function drawCurve() {
  const canvas = $("curve-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  let data;
  try {
    data = material_curve($("law").value, $("mode").value, +$("curve-max").value, 200);
  } catch (err) {
    ctx.fillText(String(err), 10, 20);
    return;
  }
  const x = [], w = [], s = [];
  for (let k = 0; k < data.length; k += 3) { x.push(data[k]); w.push(data[k + 1]); s.push(data[k + 2]); }
  const series = [[w, "#b03a2e", "W"], [s, "#1e8449", "dW/dx"]];
  series.forEach(([ys, color, label], i) => {
    const map = fitTransform(canvas, x, ys, 30);
    ctx.strokeStyle = color;
    ctx.beginPath();
    ys.forEach((y, k) => { const [px, py] = map(x[k], y); k ? ctx.lineTo(px, py) : ctx.moveTo(px, py); });
    ctx.stroke();
    ctx.fillStyle = color;
    ctx.fillText(`${label} (max ${Math.max(...ys).toPrecision(4)})`, 40, 16 + 14 * i);
  });
}

function drawBasis() {
  const canvas = $("basis-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const family = $("family").value;
  $("basis-index").max = family === "whitney" ? 5 : 11;
  let data;
  try {
    data = basis_field(family, +$("basis-index").value, 12);
  } catch (err) {
    ctx.fillText(String(err), 10, 20);
    return;
  }
  const map = fitTransform(canvas, [0, 1], [0, 1], 30);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  [[0, 0], [1, 0], [0, 1], [0, 0]].forEach(([x, y], k) => { const [px, py] = map(x, y); k ? ctx.lineTo(px, py) : ctx.moveTo(px, py); });
  ctx.stroke();
  let vmax = 1e-12;
  for (let k = 0; k < data.length; k += 4) vmax = Math.max(vmax, Math.hypot(data[k + 2], data[k + 3]));
  const scale = 0.07 / vmax;
  ctx.strokeStyle = "#6c3483";
  for (let k = 0; k < data.length; k += 4) {
    const [x, y, vx, vy] = data.slice(k, k + 4);
    const [ax, ay] = map(x, y);
    const [bx, by] = map(x + scale * vx, y + scale * vy);
    ctx.beginPath();
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
    ctx.stroke();
    ctx.fillStyle = "#6c3483";
    ctx.fillRect(bx - 1.5, by - 1.5, 3, 3);
  }
}

await init();
$("cook-reset").onclick = buildCook;
$("cook-step").onclick = stepCook;
$("cook-run").onclick = runCook;
for (const id of ["law", "mode", "curve-max"]) $(id).oninput = drawCurve;
for (const id of ["family", "basis-index"]) $(id).oninput = drawBasis;
buildCook();
drawCurve();
drawBasis();
