class Queue {
  #items = [];
  #head = 0;
  enqueue(value) {
    this.#items.push(value);
  }
  dequeue() {
    if (this.#head >= this.#items.length) return undefined;
    const value = this.#items[this.#head++];
    if (this.#head > 32 && this.#head * 2 > this.#items.length) {
      this.#items = this.#items.slice(this.#head);
      this.#head = 0;
    }
    return value;
  }
  get size() {
    return this.#items.length - this.#head;
  }
  static from(values) {
    const queue = new Queue();
    for (const value of values) queue.enqueue(value);
    return queue;
  }
}
