// Spawns the real kernel server for the protocol tests.

import { spawn, type ChildProcess } from "node:child_process";
import * as net from "node:net";

import { ProofClient } from "../src/client.js";
import { TcpTransport } from "../src/protocol.js";

export interface LiveServer {
  port: number;
  proc: ChildProcess;
  stop(): void;
}

async function portIsOpen(port: number): Promise<boolean> {
  return new Promise((resolve) => {
    const sock = net.createConnection({ port, host: "127.0.0.1" });
    sock.once("connect", () => {
      sock.destroy();
      resolve(true);
    });
    sock.once("error", () => resolve(false));
  });
}

export async function startServer(port: number): Promise<LiveServer> {
  const proc = spawn("hornproof", ["serve", "--port", String(port)], {
    stdio: ["ignore", "ignore", "inherit"],
  });
  for (let i = 0; i < 100; i++) {
    if (await portIsOpen(port)) {
      return { port, proc, stop: () => proc.kill() };
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  proc.kill();
  throw new Error("kernel server did not come up");
}

export async function connectClient(port: number): Promise<ProofClient> {
  const transport = await TcpTransport.connect(port);
  const client = new ProofClient(transport);
  const hello = await client.hello();
  if (!hello.ok) throw new Error("hello failed");
  return client;
}

/** The schematic conclusion with generation suffixes erased. */
export function schematic(text: string | null): string {
  return (text ?? "").replace(/@\d+/g, "");
}
