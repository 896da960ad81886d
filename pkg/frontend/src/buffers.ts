/** Fixed-capacity ring buffer; pushing past capacity drops the oldest item. */
export class RingBuffer<T> {
  private items: T[];
  private start = 0;
  private count = 0;

  constructor(readonly capacity: number) {
    if (capacity < 1) throw new Error(`capacity must be >= 1, got ${capacity}`);
    this.items = new Array<T>(capacity);
  }

  push(item: T): void {
    const end = (this.start + this.count) % this.capacity;
    this.items[end] = item;
    if (this.count < this.capacity) {
      this.count += 1;
    } else {
      this.start = (this.start + 1) % this.capacity;
    }
  }

  get length(): number {
    return this.count;
  }

  at(i: number): T {
    if (i < 0 || i >= this.count) throw new RangeError(`index ${i} out of range`);
    return this.items[(this.start + i) % this.capacity];
  }

  last(): T | undefined {
    return this.count ? this.at(this.count - 1) : undefined;
  }

  toArray(): T[] {
    const out = new Array<T>(this.count);
    for (let i = 0; i < this.count; i++) out[i] = this.at(i);
    return out;
  }

  clear(): void {
    this.start = 0;
    this.count = 0;
  }
}
