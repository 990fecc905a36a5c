var e=function(e){this.capacity=e,this.entries=new Map};e.prototype.get=function(e){if(this.entries.has(e)){var t=this.entries.get(e);return this.entries.delete(e),this.entries.set(e,t),t}},e.prototype.put=function(e,t){if(this.entries.has(e)&&this.entries.delete(e),this.entries.set(e,t),this.entries.size>this.capacity){var i=this.entries.keys().next().value;this.entries.delete(i)}};
