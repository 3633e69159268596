// Wire layer for the session protocol (see PROTOCOL.md at the repo root):
// length-prefixed JSON over a local socket, one response per request,
// strictly in order.  The transport serializes requests so at most one is
// in flight, which the rest of the client relies on.

import * as net from "node:net";

export interface ErrorInfo {
  kind: string;
  message: string;
}

export interface Response {
  ok: boolean;
  error?: ErrorInfo;
  [key: string]: unknown;
}

export interface Transport {
  request(payload: Record<string, unknown>): Promise<Response>;
  close(): void;
}

export function encodeFrame(payload: Record<string, unknown>): Buffer {
  const body = Buffer.from(JSON.stringify(payload), "utf-8");
  return Buffer.concat([Buffer.from(`${body.length}\n`, "ascii"), body]);
}

/** Incremental decoder for length-prefixed JSON frames. */
export class FrameDecoder {
  private buffer = Buffer.alloc(0);

  push(chunk: Buffer): Response[] {
    this.buffer = Buffer.concat([this.buffer, chunk]);
    const out: Response[] = [];
    for (;;) {
      const nl = this.buffer.indexOf(0x0a);
      if (nl < 0) break;
      const header = this.buffer.subarray(0, nl).toString("ascii");
      const length = Number.parseInt(header, 10);
      if (!Number.isFinite(length) || length < 0) {
        throw new Error(`bad frame header: ${JSON.stringify(header)}`);
      }
      if (this.buffer.length < nl + 1 + length) break;
      const body = this.buffer.subarray(nl + 1, nl + 1 + length);
      this.buffer = this.buffer.subarray(nl + 1 + length);
      out.push(JSON.parse(body.toString("utf-8")) as Response);
    }
    return out;
  }
}

export class TcpTransport implements Transport {
  private decoder = new FrameDecoder();
  private waiters: Array<{
    resolve: (r: Response) => void;
    reject: (e: Error) => void;
  }> = [];
  private queue: Promise<unknown> = Promise.resolve();
  private closed = false;

  private constructor(private socket: net.Socket) {
    socket.on("data", (chunk) => {
      let frames: Response[];
      try {
        frames = this.decoder.push(chunk);
      } catch (e) {
        this.fail(e as Error);
        return;
      }
      for (const frame of frames) {
        const waiter = this.waiters.shift();
        if (waiter) waiter.resolve(frame);
      }
    });
    socket.on("error", (e) => this.fail(e));
    socket.on("close", () => this.fail(new Error("connection closed")));
  }

  static connect(port: number, host = "127.0.0.1"): Promise<TcpTransport> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ port, host }, () =>
        resolve(new TcpTransport(socket)),
      );
      socket.once("error", reject);
    });
  }

  private fail(e: Error): void {
    if (this.closed) return;
    this.closed = true;
    for (const w of this.waiters.splice(0)) w.reject(e);
  }

  request(payload: Record<string, unknown>): Promise<Response> {
    // serialize: the next request goes out only after the previous
    // response arrived (single in-flight command)
    const send = () =>
      new Promise<Response>((resolve, reject) => {
        if (this.closed) {
          reject(new Error("transport closed"));
          return;
        }
        this.waiters.push({ resolve, reject });
        this.socket.write(encodeFrame(payload));
      });
    const result = this.queue.then(send, send);
    this.queue = result.catch(() => undefined);
    return result;
  }

  close(): void {
    this.closed = true;
    this.socket.destroy();
  }
}
