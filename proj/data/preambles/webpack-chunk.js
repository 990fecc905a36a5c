//@pattern webpack JSONP chunk push on a global (self, window, globalThis)
(self.webpackChunkapp=self.webpackChunkapp||[]).push([])
//@pattern webpack 5 JSONP chunk push on this
(this.webpackChunkapp=this.webpackChunkapp||[]).push([])
