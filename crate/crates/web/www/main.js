import init, { frequencySplit, relight, compare, RelightParams } from "./pkg/rcflow_web.js";

function draw(section, panels) {
  const canvas = section.querySelector("canvas");
  canvas.width = panels.width();
  canvas.height = panels.height();
  const image = new ImageData(new Uint8ClampedArray(panels.pixels()), panels.width(), panels.height());
  canvas.getContext("2d").putImageData(image, 0, 0);
  const stats = panels.stats();
  panels.free();
  return stats;
}

function value(section, name) {
  const input = section.querySelector(`[name=${name}]`);
  return input.type === "checkbox" ? input.checked : Number(input.value);
}

function wire(id, render) {
  const section = document.getElementById(id);
  const update = () => {
    for (const out of section.querySelectorAll("output")) {
      out.textContent = out.previousElementSibling.value;
    }
    const started = performance.now();
    try {
      const text = render(section);
      section.querySelector(".stats").textContent = `${text}  (${(performance.now() - started).toFixed(0)} ms)`;
    } catch (err) {
      section.querySelector(".stats").textContent = `error: ${err}`;
    }
  };
  section.addEventListener("input", update);
  update();
}

await init();

wire("split", (s) => {
  const [low, high] = draw(s, frequencySplit(value(s, "rho"), value(s, "seed")));
  return `rms low ${low.toFixed(4)}, rms high ${high.toFixed(4)}`;
});

wire("relight", (s) => {
  const p = new RelightParams();
  for (const name of ["gain", "angle", "background", "reuse_interval", "lambda", "rho", "masked", "point_field", "seed"]) {
    p[name] = value(s, name);
  }
  const [nfe, fg, bg, toTarget] = draw(s, relight(p));
  p.free();
  return `NFE ${nfe}, fg structure ${fg.toFixed(3)}, bg change ${bg.toFixed(3)}, rms to target ${toTarget.toFixed(3)}`;
});

wire("compare", (s) => {
  const [feNfe, rcfNfe, diff] = draw(s, compare(value(s, "n_avg"), value(s, "seed")));
  return `FlowEdit NFE ${feNfe}, residual-corrected NFE ${rcfNfe}, rms difference ${diff.toExponential(2)}`;
});
