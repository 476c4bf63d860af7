/** Executes scene draw commands on a 2D canvas. */
import type { SceneNode } from "./gameScene.js";

export function drawScene(ctx: CanvasRenderingContext2D, nodes: SceneNode[]): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  for (const node of nodes) {
    switch (node.kind) {
      case "rect":
        ctx.fillStyle = node.color;
        ctx.fillRect(node.x * width, node.y * height, node.w * width, node.h * height);
        break;
      case "circle":
        ctx.fillStyle = node.color;
        ctx.beginPath();
        ctx.arc(node.x * width, node.y * height, node.r * Math.min(width, height), 0, Math.PI * 2);
        ctx.fill();
        break;
      case "text":
        ctx.fillStyle = node.color;
        ctx.font = `${Math.round(node.size * height)}px sans-serif`;
        ctx.fillText(node.text, node.x * width, node.y * height);
        break;
      case "overlay":
        ctx.fillStyle = "rgba(0, 0, 0, 0.6)";
        ctx.fillRect(0, 0, width, height);
        ctx.fillStyle = "#ffffff";
        ctx.font = `${Math.round(0.06 * height)}px sans-serif`;
        ctx.textAlign = "center";
        ctx.fillText(node.text, width / 2, height / 2);
        ctx.textAlign = "start";
        break;
    }
  }
}
